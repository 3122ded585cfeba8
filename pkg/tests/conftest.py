"""Shared fixtures: example documents built once per session."""
from __future__ import annotations

import pytest

from fioa import examples
from fioa.dsl import ResolvedDocument


@pytest.fixture(scope="session")
def mutex_env() -> ResolvedDocument:
    return examples.build("mutex")


@pytest.fixture(scope="session")
def broken_mutex_env() -> ResolvedDocument:
    return examples.build("broken_mutex")


@pytest.fixture(scope="session")
def admin_env() -> ResolvedDocument:
    return examples.build("administrator")


@pytest.fixture(scope="session")
def mitm_env() -> ResolvedDocument:
    return examples.build("mitm")


@pytest.fixture(scope="session")
def ring2_env() -> ResolvedDocument:
    return examples.build("ring2")


@pytest.fixture(scope="session")
def ring3_env() -> ResolvedDocument:
    return examples.build("ring3")


@pytest.fixture(scope="session")
def ring_eq_env() -> ResolvedDocument:
    return examples.build("ring2_eq")


@pytest.fixture(scope="session")
def all_restrictions(mutex_env, broken_mutex_env, mitm_env, ring2_env, ring3_env, ring_eq_env):
    """Every channel-coupled configuration graph the corpus builds."""
    out = []
    for env in (mutex_env, broken_mutex_env, mitm_env, ring2_env, ring3_env, ring_eq_env):
        for built in env.networks.values():
            if built.restricted is not None:
                out.append(built)
    return out
