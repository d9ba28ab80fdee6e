"""Annotation workflow state: tasks, submissions, disagreements, export.

Every README is labeled unit by unit by two annotators in round 1; label
disagreements go to a designated resolver in round 2.  All mutations append
to a JSONL event log, so a store replayed from its log reaches the same
state and the export is reproducible.
"""

import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone

from srcmine.readme.dataset import UnitRecord
from srcmine.readme.segment import CATEGORIES
from srcmine.stats.agreement import cohen_kappa
from srcmine.stats.descriptive import median

ROUND_INDEPENDENT = 1
ROUND_ADJUDICATION = 2


class AnnotationError(Exception):
    pass


class UnknownAnnotator(AnnotationError):
    pass


class UnknownTask(AnnotationError):
    pass


class NotTaskOwner(AnnotationError):
    pass


class InvalidSubmission(AnnotationError):
    pass


@dataclass
class AnnotationTask:
    task_id: str
    repo_url: str
    unit_index: int
    annotator_id: str
    round: int
    status: str = "pending"  # pending | submitted


@dataclass
class LabelSubmission:
    task_id: str
    labels: frozenset
    non_english: bool = False
    too_simple: bool = False
    submitted_at: str = ""
    duration_seconds: float = 0.0

    def validate(self):
        unknown = set(self.labels) - set(CATEGORIES)
        if unknown:
            raise InvalidSubmission(f"unknown categories: {sorted(unknown)}")
        if not self.labels and not self.too_simple:
            raise InvalidSubmission("labels must be non-empty unless too_simple is set")
        if self.duration_seconds < 0:
            raise InvalidSubmission("duration_seconds must be >= 0")


@dataclass
class _UnitEntry:
    repo_url: str
    unit_index: int
    header_text: str
    header_level: int
    subtext: str
    content_hash: str


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _balanced_pairs(n_items, annotators, seed):
    """Pick 2 distinct annotators per item keeping loads within 1 of each other."""
    import random

    order = list(annotators)
    random.Random(seed).shuffle(order)
    load = {a: 0 for a in order}
    pairs = []
    for _ in range(n_items):
        chosen = sorted(order, key=lambda a: (load[a], order.index(a)))[:2]
        for a in chosen:
            load[a] += 1
        pairs.append(tuple(chosen))
    return pairs


class AnnotationStore:
    def __init__(self, resolver_id: str = "resolver", log_path=None):
        self.resolver_id = resolver_id
        self.log_path = str(log_path) if log_path else None
        self.annotators = set()
        self.tasks = {}
        self.task_order = []
        self.units = {}  # (repo_url, unit_index) -> _UnitEntry
        self.submissions = {}  # task_id -> list of LabelSubmission (last one wins)
        self._lock = threading.Lock()

    # -- event log ---------------------------------------------------------

    def _log(self, event: dict):
        if not self.log_path:
            return
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    @classmethod
    def replay(cls, log_path, resolver_id: str = "resolver") -> "AnnotationStore":
        """Rebuild a store from its event log (log stays attached)."""
        store = cls(resolver_id=resolver_id)
        with open(log_path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                event = json.loads(line)
                if event["event"] == "tasks_created":
                    store._apply_created(event)
                elif event["event"] == "submission":
                    store._apply_submission(event)
        store.log_path = str(log_path)
        return store

    def _apply_created(self, event):
        self.annotators.update(event["annotators"])
        for raw in event["units"]:
            key = (raw["repo_url"], raw["unit_index"])
            self.units[key] = _UnitEntry(**raw)
        for raw in event["tasks"]:
            task = AnnotationTask(**raw)
            self.tasks[task.task_id] = task
            self.task_order.append(task.task_id)

    def _apply_submission(self, event):
        task = self.tasks[event["task_id"]]
        submission = LabelSubmission(
            task_id=event["task_id"],
            labels=frozenset(event["labels"]),
            non_english=event["non_english"],
            too_simple=event["too_simple"],
            submitted_at=event["submitted_at"],
            duration_seconds=event["duration_seconds"],
        )
        self.submissions.setdefault(task.task_id, []).append(submission)
        task.status = "submitted"

    # -- task creation -----------------------------------------------------

    def create_tasks(self, readmes, annotators, seed=0) -> list:
        """Two round-1 tasks per unit, annotator loads balanced within 1."""
        annotators = list(dict.fromkeys(annotators))
        if len(annotators) < 2:
            raise ValueError("need at least 2 annotators")
        with self._lock:
            self.annotators.update(annotators)
            pairs = _balanced_pairs(len(readmes), annotators, seed)
            created = []
            unit_payload = []
            for doc, pair in zip(readmes, pairs):
                for unit_index, unit in enumerate(doc.units):
                    key = (doc.repo_url, unit_index)
                    entry = _UnitEntry(
                        repo_url=doc.repo_url,
                        unit_index=unit_index,
                        header_text=unit.header_text,
                        header_level=unit.header_level,
                        subtext=unit.subtext,
                        content_hash=hashlib.sha256(doc.raw_markdown.encode()).hexdigest(),
                    )
                    self.units[key] = entry
                    unit_payload.append(entry.__dict__.copy())
                    for annotator in pair:
                        task = AnnotationTask(
                            task_id=f"t{len(self.task_order) + len(created):06d}",
                            repo_url=doc.repo_url,
                            unit_index=unit_index,
                            annotator_id=annotator,
                            round=ROUND_INDEPENDENT,
                        )
                        created.append(task)
            for task in created:
                self.tasks[task.task_id] = task
                self.task_order.append(task.task_id)
            self._log(
                {
                    "event": "tasks_created",
                    "annotators": sorted(self.annotators),
                    "units": unit_payload,
                    "tasks": [t.__dict__.copy() for t in created],
                }
            )
            return created

    # -- the annotator loop --------------------------------------------------

    def next_task(self, annotator_id) -> AnnotationTask | None:
        if annotator_id != self.resolver_id and annotator_id not in self.annotators:
            raise UnknownAnnotator(annotator_id)
        for task_id in self.task_order:
            task = self.tasks[task_id]
            if task.annotator_id == annotator_id and task.status == "pending":
                return task
        return None

    def unit_for_task(self, task: AnnotationTask) -> _UnitEntry:
        return self.units[(task.repo_url, task.unit_index)]

    def counts(self, annotator_id=None) -> dict:
        tasks = [
            t
            for t in self.tasks.values()
            if annotator_id is None or t.annotator_id == annotator_id
        ]
        return {
            "pending": sum(1 for t in tasks if t.status == "pending"),
            "submitted": sum(1 for t in tasks if t.status == "submitted"),
            "created": len(tasks),
        }

    def submit(self, annotator_id, submission: LabelSubmission) -> dict:
        """Persist one submission; resubmission replaces with an audit trail."""
        with self._lock:
            task = self.tasks.get(submission.task_id)
            if task is None:
                raise UnknownTask(submission.task_id)
            if task.annotator_id != annotator_id:
                raise NotTaskOwner(
                    f"task {submission.task_id} belongs to {task.annotator_id!r}"
                )
            submission.validate()
            if not submission.submitted_at:
                submission.submitted_at = _now()
            history = self.submissions.setdefault(task.task_id, [])
            history.append(submission)
            task.status = "submitted"
            self._log(
                {
                    "event": "submission",
                    "task_id": submission.task_id,
                    "annotator_id": annotator_id,
                    "labels": sorted(submission.labels),
                    "non_english": submission.non_english,
                    "too_simple": submission.too_simple,
                    "submitted_at": submission.submitted_at,
                    "duration_seconds": submission.duration_seconds,
                }
            )
            return {
                "task_id": task.task_id,
                "status": "submitted",
                "resubmission": len(history) > 1,
            }

    def current_submission(self, task_id) -> LabelSubmission | None:
        history = self.submissions.get(task_id)
        return history[-1] if history else None

    # -- disagreement handling ----------------------------------------------

    def _round1_pairs(self):
        """(unit key) -> list of (task, submission) for submitted round-1 tasks."""
        by_unit = {}
        for task_id in self.task_order:
            task = self.tasks[task_id]
            if task.round != ROUND_INDEPENDENT or task.status != "submitted":
                continue
            submission = self.current_submission(task_id)
            by_unit.setdefault((task.repo_url, task.unit_index), []).append(
                (task, submission)
            )
        return {key: pair for key, pair in by_unit.items() if len(pair) == 2}

    def disagreements(self) -> dict:
        """Units whose two round-1 submissions differ; spawns round-2 tasks.

        Label-set differences and flag-only differences are listed
        separately; only label differences get adjudication tasks.
        """
        with self._lock:
            label_rows = []
            flag_rows = []
            for key, pair in sorted(self._round1_pairs().items()):
                (task_a, sub_a), (task_b, sub_b) = pair
                if sub_a.labels != sub_b.labels:
                    label_rows.append(
                        {
                            "repo_url": key[0],
                            "unit_index": key[1],
                            "labels": [sorted(sub_a.labels), sorted(sub_b.labels)],
                            "annotators": [task_a.annotator_id, task_b.annotator_id],
                        }
                    )
                    self._ensure_adjudication_task(key)
                if (sub_a.non_english, sub_a.too_simple) != (sub_b.non_english, sub_b.too_simple):
                    flag_rows.append(
                        {
                            "repo_url": key[0],
                            "unit_index": key[1],
                            "flags": [
                                [sub_a.non_english, sub_a.too_simple],
                                [sub_b.non_english, sub_b.too_simple],
                            ],
                            "annotators": [task_a.annotator_id, task_b.annotator_id],
                        }
                    )
            return {"labels": label_rows, "flags": flag_rows}

    def _ensure_adjudication_task(self, unit_key):
        for task in self.tasks.values():
            if (
                task.round == ROUND_ADJUDICATION
                and (task.repo_url, task.unit_index) == unit_key
            ):
                return task
        task = AnnotationTask(
            task_id=f"t{len(self.task_order):06d}",
            repo_url=unit_key[0],
            unit_index=unit_key[1],
            annotator_id=self.resolver_id,
            round=ROUND_ADJUDICATION,
        )
        self.tasks[task.task_id] = task
        self.task_order.append(task.task_id)
        self._log(
            {
                "event": "tasks_created",
                "annotators": sorted(self.annotators),
                "units": [],
                "tasks": [task.__dict__.copy()],
            }
        )
        return task

    # -- export and reporting ------------------------------------------------

    def _resolution(self, unit_key):
        """(labels, flags, annotator_ids, round) for a resolved unit, else None."""
        pairs = self._round1_pairs().get(unit_key)
        if not pairs:
            return None
        (task_a, sub_a), (task_b, sub_b) = pairs
        annotators = [task_a.annotator_id, task_b.annotator_id]
        if sub_a.labels == sub_b.labels:
            flags = (sub_a.non_english or sub_b.non_english,
                     sub_a.too_simple or sub_b.too_simple)
            return sub_a.labels, flags, annotators, ROUND_INDEPENDENT
        for task in self.tasks.values():
            if (
                task.round == ROUND_ADJUDICATION
                and (task.repo_url, task.unit_index) == unit_key
                and task.status == "submitted"
            ):
                resolution = self.current_submission(task.task_id)
                flags = (resolution.non_english, resolution.too_simple)
                return resolution.labels, flags, annotators + [task.annotator_id], ROUND_ADJUDICATION
        return None

    def export_dataset(self) -> dict:
        """Resolved units in the dataset schema, deduplicated by content hash.

        Returns {records, excluded_pending, duplicate_urls}; duplicate
        README content is exported once with every URL it appeared under
        listed in duplicate_urls.
        """
        with self._lock:
            records = []
            excluded = 0
            seen_hashes = {}
            duplicate_urls = {}
            exported_units = sorted(self.units)
            for key in exported_units:
                entry = self.units[key]
                resolved = self._resolution(key)
                if resolved is None:
                    if key in self._round1_pairs() or self._has_any_submission(key):
                        excluded += 1
                    continue
                labels, (non_english, too_simple), annotators, round_no = resolved
                canonical = seen_hashes.get((entry.content_hash, entry.unit_index))
                if canonical is not None:
                    duplicate_urls.setdefault(canonical, []).append(entry.repo_url)
                    continue
                seen_hashes[(entry.content_hash, entry.unit_index)] = entry.repo_url
                records.append(
                    UnitRecord(
                        repo_url=entry.repo_url,
                        unit_index=entry.unit_index,
                        header_text=entry.header_text,
                        header_level=entry.header_level,
                        subtext=entry.subtext,
                        labels=tuple(sorted(labels)),
                        non_english=non_english,
                        too_simple=too_simple,
                        annotator_ids=tuple(annotators),
                        round=round_no,
                    )
                )
            return {
                "records": records,
                "excluded_pending": excluded,
                "duplicate_urls": duplicate_urls,
            }

    def _has_any_submission(self, unit_key):
        for task_id in self.task_order:
            task = self.tasks[task_id]
            if (task.repo_url, task.unit_index) == unit_key and task.status == "submitted":
                return True
        return False

    def agreement_report(self) -> dict:
        """Round-1 agreement: pooled per-(unit,label) kappa plus durations."""
        pairs = self._round1_pairs()
        if not pairs:
            raise AnnotationError("nothing doubly annotated yet")
        pooled_a = []
        pooled_b = []
        exact_a = []
        exact_b = []
        durations = []
        for key in sorted(pairs):
            (_, sub_a), (_, sub_b) = pairs[key]
            for category in CATEGORIES:
                pooled_a.append(category in sub_a.labels)
                pooled_b.append(category in sub_b.labels)
            exact_a.append(frozenset(sub_a.labels))
            exact_b.append(frozenset(sub_b.labels))
            durations.extend([sub_a.duration_seconds, sub_b.duration_seconds])
        pooled = cohen_kappa(pooled_a, pooled_b)
        try:
            exact = cohen_kappa(exact_a, exact_b).kappa
        except ValueError:
            exact = 1.0
        return {
            "kappa": pooled.kappa,
            "kappa_basis": "per-(unit,label) binary pooling; exact-match variant reported alongside",
            "kappa_exact_match": exact,
            "observed_agreement": pooled.observed_agreement,
            "expected_agreement": pooled.expected_agreement,
            "median_duration_seconds": median(durations),
            "n_units": len(pairs),
        }
