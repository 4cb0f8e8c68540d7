"""Shared fixtures: the three reference solitary waves and their Evans systems.

Profiles are session-scoped because every module exercises the same three
waves: a steep St. Venant wave with quadratic friction (F=9, nu=0.1), a
smooth St. Venant wave with linear friction (F=0.222, nu=20), and the
Jin-Xin wave (cs=1, p=1/2).
"""

import pytest

from rollwave import EvansSystem, ModelSpec, WaveParams, solve_homoclinic

SV20_SPEED = 0.784938889863119
SV11_SPEED = 3.1868775173001964
JX_SPEED = 1.0


@pytest.fixture(scope="session")
def sv20_model():
    return ModelSpec(kind="st_venant", F=9.0, nu=0.1, r=2.0, s=0.0)


@pytest.fixture(scope="session")
def sv11_model():
    return ModelSpec(kind="st_venant", F=0.222, nu=20.0, r=1.0, s=1.0)


@pytest.fixture(scope="session")
def jx_model():
    return ModelSpec(kind="jin_xin", cs=1.0, p=0.5)


@pytest.fixture(scope="session")
def sv20_wave():
    return WaveParams(c=SV20_SPEED, q=1.0 + SV20_SPEED)


@pytest.fixture(scope="session")
def sv11_wave():
    return WaveParams(c=SV11_SPEED, q=1.0 + SV11_SPEED)


@pytest.fixture(scope="session")
def jx_wave():
    return WaveParams(c=JX_SPEED, q=2.0)


@pytest.fixture(scope="session")
def sv20_profile(sv20_model, sv20_wave):
    return solve_homoclinic(sv20_model, sv20_wave)


@pytest.fixture(scope="session")
def sv11_profile(sv11_model, sv11_wave):
    return solve_homoclinic(sv11_model, sv11_wave)


@pytest.fixture(scope="session")
def jx_profile(jx_model, jx_wave):
    return solve_homoclinic(jx_model, jx_wave)


@pytest.fixture(scope="session")
def sv20_system(sv20_profile):
    return EvansSystem(sv20_profile)


@pytest.fixture(scope="session")
def sv11_system(sv11_profile):
    return EvansSystem(sv11_profile)


@pytest.fixture(scope="session")
def jx_system(jx_profile):
    return EvansSystem(jx_profile)
