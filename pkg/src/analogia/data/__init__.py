"""Bundled example knowledge bases and problem documents."""

from importlib import resources
from pathlib import Path

FIXTURES = ("berlin_rome", "two_chains", "currency", "similarity", "talaly", "mengoli")


def fixture_path(name: str) -> Path:
    if name not in FIXTURES:
        raise KeyError(f"no bundled fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return Path(str(resources.files(__name__).joinpath(f"{name}.json")))


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")
