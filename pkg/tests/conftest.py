"""Session-scoped pytest fixtures."""

from __future__ import annotations

import pytest


@pytest.fixture(scope="session")
def fixture_suite():
    from webrpa.harness import generate_fixture_suite

    return {f.name: f for f in generate_fixture_suite(0)}
