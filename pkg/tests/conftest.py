import pytest


@pytest.fixture(autouse=True)
def _isolated_quantile_cache(tmp_path_factory, monkeypatch):
    """Keep quantile-table caches out of the real home directory."""
    monkeypatch.setenv("SORTGOF_CACHE_DIR",
                       str(tmp_path_factory.getbasetemp() / "gk-cache"))
