"""Shared fixtures: static mini repos, a generated corpus, helper builders."""

from __future__ import annotations

from pathlib import Path

import pytest

from scisoftx.code_model import build_index
from scisoftx.corpus import MONO_FONT, Segment, generate_corpus, render_pdf

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def mini_java_index():
    return build_index(FIXTURES / "mini-java")


@pytest.fixture(scope="session")
def mini_py_index():
    return build_index(FIXTURES / "mini-py")


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    """The 8-document synthetic corpus, generated once per test session."""
    out = tmp_path_factory.mktemp("corpus")
    generate_corpus(out, n_docs=8, seed=7)
    return out


@pytest.fixture(scope="session")
def corpus_manifest(corpus_dir) -> dict:
    import json

    return json.loads((corpus_dir / "manifest.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def ambiguity_repo(tmp_path_factory) -> Path:
    """Two files that both declare `shared`, for disambiguation tests."""
    root = tmp_path_factory.mktemp("ambiguity") / "repo"
    (root / "alpha").mkdir(parents=True)
    (root / "beta").mkdir(parents=True)
    (root / "alpha" / "First.java").write_text(
        "package alpha;\n"
        "\n"
        "public class First {\n"
        "    public int shared(int x) {\n"
        "        return x;\n"
        "    }\n"
        "\n"
        "    public int near(int x) {\n"
        "        return x + 1;\n"
        "    }\n"
        "}\n",
        encoding="utf-8",
    )
    (root / "beta" / "Second.java").write_text(
        "package beta;\n"
        "\n"
        "public class Second {\n"
        "    public int shared(int x) {\n"
        "        return x;\n"
        "    }\n"
        "\n"
        "    public int other(int x) {\n"
        "        return x - 1;\n"
        "    }\n"
        "}\n",
        encoding="utf-8",
    )
    return root


@pytest.fixture(scope="session")
def ambiguity_index(ambiguity_repo):
    return build_index(ambiguity_repo, ("java",))


def make_pdf(path: Path, pages: list[list[list[tuple[str, str, float]]]]) -> bytes:
    """Render pages of [(text, font, size), ...] lines; returns PDF bytes."""
    segment_pages = [
        [[Segment(text, font, size) for text, font, size in line] for line in page]
        for page in pages
    ]
    return render_pdf(path, segment_pages)


def simple_mention_page(
    prefix: str = "we call ",
    mention: str = "f.compute()",
    suffix: str = " here",
) -> list[list[tuple[str, str, float]]]:
    return [
        [
            (prefix, "Helvetica", 10),
            (mention, MONO_FONT[0], MONO_FONT[1]),
            (suffix, "Helvetica", 10),
        ]
    ]
