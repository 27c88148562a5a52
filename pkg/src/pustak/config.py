"""Service configuration file handling (JSON).

Example:

    {
      "store": "var/store",
      "index": "var/index",
      "host": "127.0.0.1",
      "port": 8000,
      "rank": {"k1": 1.2, "b": 0.75, "alpha": 0.1, "phrase_weight": 2.0}
    }

Flat dotted keys ("rank.k1": 1.4) are accepted as overrides of the nested
form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .rank import RankingParams


@dataclass(frozen=True)
class ServiceConfig:
    store_dir: str
    index_dir: str
    host: str = "127.0.0.1"
    port: int = 8000
    rank: RankingParams = RankingParams()
    data_dir: Optional[str] = None


def load_config(path: str | Path) -> ServiceConfig:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    rank_obj = dict(obj.get("rank", {}))
    for key, value in obj.items():
        if key.startswith("rank."):
            rank_obj[key.split(".", 1)[1]] = value
    params = RankingParams(
        k1=float(rank_obj.get("k1", 1.2)),
        b=float(rank_obj.get("b", 0.75)),
        alpha=float(rank_obj.get("alpha", 0.1)),
        phrase_weight=float(rank_obj.get("phrase_weight", 2.0)),
    )
    return ServiceConfig(
        store_dir=obj["store"],
        index_dir=obj["index"],
        host=obj.get("host", "127.0.0.1"),
        port=int(obj.get("port", 8000)),
        rank=params,
        data_dir=obj.get("data_dir"),
    )
