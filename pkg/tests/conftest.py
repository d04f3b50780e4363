import json

import pytest

from retroscope.synthetic import make_corpus_files


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """A small synthetic corpus shared by the CLI/service tests."""
    out = tmp_path_factory.mktemp("fixture")
    movement, events, corpus_path, events_path = make_corpus_files(
        out, seed=7, n_docs=600, n_days=120, n_events=3
    )
    config = {
        "corpus": str(corpus_path),
        "events": str(events_path),
        "movement": {
            "name": movement.name,
            "seed_keywords": list(movement.seed_keywords),
        },
        "platform": "all",
        "layer": 5,
        "mode": "cumulative",
        "seed": 42,
    }
    config_path = out / "config.yaml"
    config_path.write_text(json.dumps(config), encoding="utf-8")  # JSON is valid YAML
    return {
        "dir": out,
        "config": config_path,
        "corpus": corpus_path,
        "events": events_path,
        "movement": movement,
        "events_list": events,
    }
