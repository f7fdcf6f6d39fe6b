from __future__ import annotations

import pytest

from omcascade import PulseParams


@pytest.fixture
def unit_pulse():
    return PulseParams(beta_bar=1.0, tau=1.0)
