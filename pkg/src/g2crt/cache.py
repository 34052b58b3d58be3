"""On-disk cache of per-prime class polynomial records."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from . import __version__
from .classpoly import NORMALIZATION_TAG, ClassPolyModP


class ResultCache:
    """Records keyed by (field params, p, code version, normalization tag).

    Writes go to a temporary file in the same directory followed by an atomic
    rename, so readers never see a partial record.
    """

    def __init__(self, directory, version: str = __version__, tag: str = NORMALIZATION_TAG):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.version = version
        self.tag = tag
        self.hits = 0
        self.misses = 0

    def path(self, params, p: int) -> Path:
        a, b, d = params
        tag = hashlib.sha256(self.tag.encode()).hexdigest()[:10]
        return self.dir / f"classpoly_{a}_{b}_{d}_p{p}_v{self.version}_{tag}.json"

    def get(self, params, p: int) -> Optional[ClassPolyModP]:
        path = self.path(params, p)
        if not path.exists():
            self.misses += 1
            return None
        with open(path) as fh:
            rec = json.load(fh)
        self.hits += 1
        return ClassPolyModP.from_record(rec)

    def put(self, part: ClassPolyModP) -> Path:
        path = self.path(part.params, part.p)
        if path.exists():
            return path  # immutable once written
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(part.to_record(), fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path
