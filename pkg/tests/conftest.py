import warnings

import pytest

from ellreflect.reflected import SeriesDivergenceWarning


@pytest.fixture(autouse=True)
def _quiet_series_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SeriesDivergenceWarning)
        yield
