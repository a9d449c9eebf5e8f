"""The service serves the built explorer UI when pointed at frontend/dist."""

from __future__ import annotations

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from scisoftx.config import ProjectConfig
from scisoftx.service import create_app

DIST = Path(__file__).parent.parent / "frontend" / "dist"

pytestmark = pytest.mark.skipif(
    not (DIST / "index.html").exists(),
    reason="frontend build output not present (run `npm run build` in frontend/)",
)


@pytest.fixture
def ui_client(corpus_dir, tmp_path):
    doc = corpus_dir / "doc01"
    config = ProjectConfig(
        pdf_path=doc / "paper.pdf",
        repo_path=doc / "repo",
        links_path=tmp_path / "links.xml",
        static_dir=DIST,
    )
    config.validate()
    with TestClient(create_app(config)) as client:
        yield client


def test_index_page_served(ui_client):
    response = ui_client.get("/")
    assert response.status_code == 200
    assert 'id="app"' in response.text
    assert "js/main.js" in response.text


def test_entry_module_served(ui_client):
    response = ui_client.get("/js/main.js")
    assert response.status_code == 200
    assert "boot" in response.text


def test_stylesheet_served(ui_client):
    response = ui_client.get("/style.css")
    assert response.status_code == 200
    assert "link-highlight" in response.text


def test_api_still_reachable_alongside_ui(ui_client):
    assert ui_client.get("/api/links").status_code == 200
