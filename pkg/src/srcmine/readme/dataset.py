"""Line-delimited README unit dataset: the export/import and training format.

Record schema:
  {repo_url, unit_index, header_text, header_level, subtext,
   labels: [str], non_english: bool, too_simple: bool,
   annotator_ids: [str], round: int}
"""

import json
from dataclasses import asdict, dataclass

from srcmine.readme.segment import CATEGORIES


@dataclass(frozen=True)
class UnitRecord:
    repo_url: str
    unit_index: int
    header_text: str
    header_level: int
    subtext: str
    labels: tuple
    non_english: bool = False
    too_simple: bool = False
    annotator_ids: tuple = ()
    round: int = 1

    def __post_init__(self):
        unknown = set(self.labels) - set(CATEGORIES)
        if unknown:
            raise ValueError(f"labels outside the eight-category scheme: {sorted(unknown)}")


def record_to_json(record: UnitRecord) -> str:
    payload = asdict(record)
    payload["labels"] = sorted(record.labels)
    payload["annotator_ids"] = list(record.annotator_ids)
    return json.dumps(payload, sort_keys=True)


def record_from_json(line: str) -> UnitRecord:
    payload = json.loads(line)
    return UnitRecord(
        repo_url=payload["repo_url"],
        unit_index=int(payload["unit_index"]),
        header_text=payload["header_text"],
        header_level=int(payload["header_level"]),
        subtext=payload["subtext"],
        labels=tuple(payload.get("labels", [])),
        non_english=bool(payload.get("non_english", False)),
        too_simple=bool(payload.get("too_simple", False)),
        annotator_ids=tuple(payload.get("annotator_ids", [])),
        round=int(payload.get("round", 1)),
    )


def write_units(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record_to_json(record) + "\n")


def read_units(path) -> list:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(record_from_json(line))
    return records
