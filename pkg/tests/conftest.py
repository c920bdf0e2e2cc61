from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixture_corpus import write_fixture_bundle  # noqa: E402

from aspectnews.store import BuildConfig, CorpusStore, build_corpus  # noqa: E402


@pytest.fixture(scope="session")
def fixture_bundle(tmp_path_factory) -> Path:
    """Input bundle (pages, taxonomy, profiles, articles, dictionary)."""
    target = tmp_path_factory.mktemp("bundle")
    return write_fixture_bundle(target)


@pytest.fixture(scope="session")
def fixture_config(fixture_bundle) -> BuildConfig:
    return BuildConfig.from_file(fixture_bundle)


@pytest.fixture(scope="session")
def fixture_store(fixture_config, tmp_path_factory) -> CorpusStore:
    """One corpus store built from the bundle, shared across tests."""
    out = tmp_path_factory.mktemp("stores") / "store"
    return build_corpus(fixture_config, out)


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[ACCEPTANCE] {name}: {outcome}")
