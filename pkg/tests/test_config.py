import json

import pytest

from pustak.config import load_config
from pustak.errors import DomainError


def write(tmp_path, obj):
    path = tmp_path / "service.json"
    path.write_text(json.dumps(obj), encoding="utf-8")
    return path


def test_defaults(tmp_path):
    config = load_config(write(tmp_path, {"store": "s", "index": "i"}))
    assert config.store_dir == "s"
    assert config.index_dir == "i"
    assert config.host == "127.0.0.1"
    assert config.port == 8000
    assert config.rank.k1 == 1.2
    assert config.rank.b == 0.75
    assert config.rank.alpha == 0.1
    assert config.rank.phrase_weight == 2.0


def test_nested_rank_section(tmp_path):
    config = load_config(write(tmp_path, {
        "store": "s", "index": "i",
        "rank": {"k1": 1.6, "b": 0.5, "alpha": 0.0, "phrase_weight": 3.0},
    }))
    assert config.rank.k1 == 1.6
    assert config.rank.b == 0.5
    assert config.rank.alpha == 0.0
    assert config.rank.phrase_weight == 3.0


def test_flat_dotted_keys_override(tmp_path):
    config = load_config(write(tmp_path, {
        "store": "s", "index": "i",
        "rank": {"k1": 1.6},
        "rank.k1": 2.0, "rank.alpha": 0.25,
    }))
    assert config.rank.k1 == 2.0
    assert config.rank.alpha == 0.25


def test_invalid_rank_values_rejected(tmp_path):
    with pytest.raises(DomainError):
        load_config(write(tmp_path, {"store": "s", "index": "i",
                                     "rank": {"b": 2.0}}))


def test_server_section(tmp_path):
    config = load_config(write(tmp_path, {
        "store": "s", "index": "i", "host": "0.0.0.0", "port": 9001,
    }))
    assert config.host == "0.0.0.0"
    assert config.port == 9001
