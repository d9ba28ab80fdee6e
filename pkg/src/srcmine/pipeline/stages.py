"""Pipeline stages over line-delimited artifacts in the output directory.

Stage order: ingest -> extract -> classify -> probe -> readme -> stats ->
report.  Every artifact write is deterministic (sorted JSON keys, stable
ordering), so re-running a stage over unchanged inputs reproduces its
outputs byte for byte; probe reruns stay byte-identical as long as the
cache is warm, because cached records keep their original timestamps.
"""

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

from srcmine.classify.features import OWN_CODE
from srcmine.classify.model import load_model, predict
from srcmine.classify.remote import classify_batch_remote
from srcmine.classify.rules import rule_classify
from srcmine.classify.verdict import classify_paper
from srcmine.ingest.schema import (
    UrlMention,
    document_from_payload,
    document_to_payload,
    parse_corpus,
)
from srcmine.ingest.urls import extract_url_mentions
from srcmine.pipeline.config import PipelineConfig
from srcmine.pipeline.manifest import (
    RunManifest,
    STAGES,
    file_sha256,
    now_iso,
    require_inputs,
)
from srcmine.probe.access import ProbePolicy
from srcmine.probe.cache import ProbeCache
from srcmine.probe.github import GitHubClient
from srcmine.probe.ratelimit import TokenBucket
from srcmine.probe.records import record_from_json, record_to_json
from srcmine.probe.runner import probe_url
from srcmine.readme import analyze_readme, rule_label
from srcmine.readme.dataset import UnitRecord, read_units, record_to_json as unit_to_json
from srcmine.readme.model import UnitSample, load_dual_model, predict_labels
from srcmine.stats.aggregate import aggregate_availability, aggregate_distributions
from srcmine.stats.descriptive import median
from srcmine.stats.keyphrases import keyphrase_frequencies
from srcmine.stats.normality import MIN_SAMPLE_SIZE, dagostino_pearson
from srcmine.stats.ranktests import kruskal_wallis, mann_whitney_u, spearman_rho
from srcmine.stats.results import SampleGroup


class StageFailure(Exception):
    """The stage ran but some items failed; details in the manifest."""

    def __init__(self, message, manifest=None):
        super().__init__(message)
        self.manifest = manifest


def _artifact(config, name):
    return os.path.join(config.out_dir, name)


def _write_lines(path, lines):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
    os.replace(tmp, path)


def _read_lines(path):
    with open(path, encoding="utf-8") as fh:
        return [line for line in fh if line.strip()]


def _manifest(config, stage, inputs, outputs, counters, failures=None) -> RunManifest:
    manifest = RunManifest(
        run_id=f"{stage}-{config.fingerprint()[:12]}",
        stage=stage,
        inputs=inputs,
        outputs={path: file_sha256(path) for path in outputs},
        config_fingerprint=config.fingerprint(),
        counters=counters,
        failures=failures or [],
    )
    return manifest


# -- ingest ------------------------------------------------------------------

def stage_ingest(config: PipelineConfig) -> RunManifest:
    started = now_iso()
    if not config.corpus_path or not os.path.exists(config.corpus_path):
        raise FileNotFoundError(f"corpus not found: {config.corpus_path}")
    with open(config.corpus_path, encoding="utf-8") as fh:
        result = parse_corpus(fh)
    documents_path = _artifact(config, "documents.jsonl")
    _write_lines(
        documents_path,
        [json.dumps(document_to_payload(d), sort_keys=True) for d in result.documents],
    )
    manual_path = _artifact(config, "manual.jsonl")
    _write_lines(
        manual_path,
        [
            json.dumps({"line_number": n, "error": e}, sort_keys=True)
            for n, e in result.errors
        ],
    )
    manifest = _manifest(
        config,
        "ingest",
        {config.corpus_path: file_sha256(config.corpus_path)},
        [documents_path, manual_path],
        {"papers": len(result.documents), "manual": len(result.errors)},
    )
    manifest.started_at = started
    manifest.finished_at = now_iso()
    return manifest


def _load_documents(config):
    return [
        document_from_payload(json.loads(line))
        for line in _read_lines(_artifact(config, "documents.jsonl"))
    ]


# -- extract -----------------------------------------------------------------

def stage_extract(config: PipelineConfig) -> RunManifest:
    started = now_iso()
    inputs = require_inputs("extract", config.out_dir)
    documents = _load_documents(config)
    mentions = []
    for doc in documents:
        mentions.extend(extract_url_mentions(doc))
    mentions_path = _artifact(config, "mentions.jsonl")
    _write_lines(mentions_path, [json.dumps(asdict(m), sort_keys=True) for m in mentions])
    manifest = _manifest(
        config,
        "extract",
        inputs,
        [mentions_path],
        {"papers": len(documents), "mentions": len(mentions)},
    )
    manifest.started_at = started
    manifest.finished_at = now_iso()
    return manifest


# -- classify ------------------------------------------------------------------

def _mention_labels(config, mentions):
    contexts = [m.context_sentence for m in mentions]
    if config.classifier_mode == "rules":
        return [rule_classify(text) for text in contexts]
    if config.classifier_mode == "model":
        model = load_model(config.model_path)
        return [predict(model, text).label for text in contexts]
    results = []
    batch = 64
    for start in range(0, len(contexts), batch):
        chunk = contexts[start:start + batch]
        results.extend(r.label for r in classify_batch_remote(config.remote_endpoint, chunk))
    return results


def stage_classify(config: PipelineConfig) -> RunManifest:
    started = now_iso()
    inputs = require_inputs("classify", config.out_dir)
    documents = _load_documents(config)
    mentions = [
        UrlMention(**json.loads(line))
        for line in _read_lines(_artifact(config, "mentions.jsonl"))
    ]
    labels = _mention_labels(config, mentions)
    by_paper = {}
    for mention, label in zip(mentions, labels):
        by_paper.setdefault(mention.paper_id, []).append((mention, label))
    lines = []
    positives = 0
    for doc in documents:
        verdict = classify_paper(
            doc.paper_id, by_paper.get(doc.paper_id, []), venue=doc.venue, year=doc.year
        )
        positives += int(verdict.has_available_code)
        lines.append(
            json.dumps(
                {
                    "paper_id": verdict.paper_id,
                    "venue": verdict.venue,
                    "year": verdict.year,
                    "has_available_code": verdict.has_available_code,
                    "positive_mentions": [asdict(m) for m in verdict.positive_mentions],
                },
                sort_keys=True,
            )
        )
    verdicts_path = _artifact(config, "verdicts.jsonl")
    _write_lines(verdicts_path, lines)
    manifest = _manifest(
        config,
        "classify",
        inputs,
        [verdicts_path],
        {"papers": len(documents), "mentions": len(mentions), "positives": positives},
    )
    manifest.started_at = started
    manifest.finished_at = now_iso()
    return manifest


def _load_verdicts(config):
    return [json.loads(line) for line in _read_lines(_artifact(config, "verdicts.jsonl"))]


# -- probe ---------------------------------------------------------------------

def stage_probe(config: PipelineConfig) -> RunManifest:
    started = now_iso()
    inputs = require_inputs("probe", config.out_dir)
    verdicts = _load_verdicts(config)
    urls = sorted(
        {
            m["normalized_url"]
            for v in verdicts
            for m in v["positive_mentions"]
        }
    )
    os.makedirs(config.cache_dir, exist_ok=True)
    cache = ProbeCache(
        os.path.join(config.cache_dir, "probe.jsonl"), ttl_seconds=config.cache_ttl_seconds
    )
    limiter = TokenBucket(config.rate_capacity, config.rate_per_second)
    policy = ProbePolicy(
        attempts=config.probe_attempts,
        backoff_start=config.probe_backoff_start,
        timeout=config.probe_timeout,
    )
    github = GitHubClient(
        base_url=config.github_base_url, token_env=config.token_env, limiter=limiter
    )
    readme_dir = os.path.join(config.cache_dir, "readmes")
    failures = []

    def probe_one(url):
        try:
            return record_to_json(
                probe_url(
                    url,
                    cache=cache,
                    policy=policy,
                    limiter=limiter,
                    github=github,
                    readme_dir=readme_dir,
                    fetch_readmes=config.fetch_readmes,
                )
            )
        except Exception as exc:  # per-item failure, recorded not raised
            failures.append({"url": url, "error": str(exc)})
            return None

    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        results = list(pool.map(probe_one, urls))
    repos_path = _artifact(config, "repos.jsonl")
    _write_lines(repos_path, [line for line in results if line is not None])
    manifest = _manifest(
        config,
        "probe",
        inputs,
        [repos_path],
        {"probes": len(urls), "failed": len(failures)},
        failures,
    )
    manifest.started_at = started
    manifest.finished_at = now_iso()
    return manifest


def _load_repos(config):
    return [record_from_json(line) for line in _read_lines(_artifact(config, "repos.jsonl"))]


# -- readme ----------------------------------------------------------------------

def stage_readme_segment(config: PipelineConfig) -> RunManifest:
    started = now_iso()
    inputs = require_inputs("readme", config.out_dir)
    repos = _load_repos(config)
    readme_dir = os.path.join(config.cache_dir, "readmes")
    lines = []
    n_files = 0
    for repo in sorted(repos, key=lambda r: r.normalized_url):
        if not repo.readme_ref:
            continue
        path = os.path.join(readme_dir, repo.readme_ref)
        if not os.path.exists(path):
            continue
        with open(path, encoding="utf-8") as fh:
            markdown = fh.read()
        doc = analyze_readme(repo.normalized_url, markdown)
        n_files += 1
        for index, unit in enumerate(doc.units):
            lines.append(
                unit_to_json(
                    UnitRecord(
                        repo_url=repo.normalized_url,
                        unit_index=index,
                        header_text=unit.header_text,
                        header_level=unit.header_level,
                        subtext=unit.subtext,
                        labels=(),
                        non_english=doc.non_english,
                        too_simple=doc.too_simple,
                    )
                )
            )
    units_path = _artifact(config, "units.jsonl")
    _write_lines(units_path, lines)
    manifest = _manifest(
        config,
        "readme",
        inputs,
        [units_path],
        {"files": n_files, "units": len(lines)},
    )
    manifest.started_at = started
    manifest.finished_at = now_iso()
    return manifest


def stage_readme_classify(config: PipelineConfig) -> RunManifest:
    started = now_iso()
    units_path = _artifact(config, "units.jsonl")
    if not os.path.exists(units_path):
        stage_readme_segment(config)
    records = read_units(units_path)
    model = None
    if config.classifier_mode == "model" and config.model_path:
        model = load_dual_model(config.model_path)
    lines = []
    for record in records:
        if model is None:
            labels = rule_label(record.header_text)
        else:
            sample = UnitSample(
                header_text=record.header_text,
                subtext=record.subtext,
                labels=frozenset(),
            )
            labels = predict_labels(model, sample).labels
        lines.append(
            unit_to_json(
                UnitRecord(
                    repo_url=record.repo_url,
                    unit_index=record.unit_index,
                    header_text=record.header_text,
                    header_level=record.header_level,
                    subtext=record.subtext,
                    labels=tuple(sorted(labels)),
                    non_english=record.non_english,
                    too_simple=record.too_simple,
                )
            )
        )
    labeled_path = _artifact(config, "labeled_units.jsonl")
    _write_lines(labeled_path, lines)
    manifest = _manifest(
        config,
        "readme",
        {units_path: file_sha256(units_path)},
        [labeled_path],
        {"units": len(lines)},
    )
    manifest.started_at = started
    manifest.finished_at = now_iso()
    return manifest


def stage_readme(config: PipelineConfig) -> RunManifest:
    segment_manifest = stage_readme_segment(config)
    classify_manifest = stage_readme_classify(config)
    classify_manifest.inputs.update(segment_manifest.inputs)
    classify_manifest.outputs.update(segment_manifest.outputs)
    classify_manifest.counters.update(segment_manifest.counters)
    classify_manifest.started_at = segment_manifest.started_at
    return classify_manifest


# -- stats -----------------------------------------------------------------------

def _venue_metric_groups(verdicts, repos):
    """Per-venue star/fork samples over accessible GitHub repos."""
    by_url = {r.normalized_url: r for r in repos}
    stars = {}
    forks = {}
    for verdict in verdicts:
        venue = verdict["venue"]
        seen = set()
        for mention in verdict["positive_mentions"]:
            url = mention["normalized_url"]
            if url in seen:
                continue
            seen.add(url)
            repo = by_url.get(url)
            if repo is None or repo.stars is None:
                continue
            stars.setdefault(venue, []).append(float(repo.stars))
            forks.setdefault(venue, []).append(float(repo.forks))
    return stars, forks


def _test_payload(result):
    return {
        "statistic": result.statistic,
        "p_value": result.p_value,
        "method": result.method,
        "reject_at_5pct": result.reject_at_5pct,
        "notes": result.notes,
    }


def _metric_tests(samples_by_venue):
    tests = {"normality": {}, "kruskal_wallis": None, "pairwise": []}
    for venue, values in sorted(samples_by_venue.items()):
        if len(values) >= MIN_SAMPLE_SIZE and len(set(values)) > 1:
            tests["normality"][venue] = _test_payload(dagostino_pearson(values))
        else:
            tests["normality"][venue] = {"skipped": f"n={len(values)} too small"}
    groups = [
        SampleGroup(venue, values)
        for venue, values in sorted(samples_by_venue.items())
        if values
    ]
    if len(groups) >= 2 and sum(len(g.values) for g in groups) >= 5:
        try:
            tests["kruskal_wallis"] = _test_payload(kruskal_wallis(groups))
        except ValueError as exc:
            tests["kruskal_wallis"] = {"skipped": str(exc)}
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            entry = {"pair": [groups[i].group_id, groups[j].group_id]}
            try:
                entry.update(_test_payload(mann_whitney_u(groups[i].values, groups[j].values)))
            except ValueError as exc:
                entry["skipped"] = str(exc)
            tests["pairwise"].append(entry)
    return tests


def _category_shares(labeled_records):
    from srcmine.readme.segment import CATEGORIES

    per_unit = {c: 0 for c in CATEGORIES}
    files = {}
    for record in labeled_records:
        files.setdefault(record.repo_url, set()).update(record.labels)
        for label in record.labels:
            per_unit[label] += 1
    n_units = len(labeled_records)
    n_files = len(files)
    return {
        "unit_share": {
            c: (per_unit[c] / n_units if n_units else 0.0) for c in CATEGORIES
        },
        "file_share": {
            c: (
                sum(1 for labels in files.values() if c in labels) / n_files
                if n_files
                else 0.0
            )
            for c in CATEGORIES
        },
        "n_units": n_units,
        "n_files": n_files,
    }


def stage_stats(config: PipelineConfig) -> RunManifest:
    started = now_iso()
    inputs = require_inputs("stats", config.out_dir)
    documents = _load_documents(config)
    verdicts = _load_verdicts(config)
    repos = _load_repos(config)
    availability = aggregate_availability(verdicts)
    distributions = aggregate_distributions(repos)
    stars, forks = _venue_metric_groups(verdicts, repos)
    star_medians = {v: median(vals) for v, vals in sorted(stars.items())}
    fork_medians = {v: median(vals) for v, vals in sorted(forks.items())}
    spearman = None
    shared = sorted(set(star_medians) & set(fork_medians))
    if len(shared) >= 3:
        try:
            spearman = _test_payload(
                spearman_rho(
                    [star_medians[v] for v in shared], [fork_medians[v] for v in shared]
                )
            )
        except ValueError as exc:
            spearman = {"skipped": str(exc)}
    positive_ids = {v["paper_id"] for v in verdicts if v["has_available_code"]}
    abstracts = [d.abstract for d in documents if d.paper_id in positive_ids]
    labeled_path = _artifact(config, "labeled_units.jsonl")
    labeled = read_units(labeled_path) if os.path.exists(labeled_path) else []
    report = {
        "availability": {
            "cells": [
                {
                    "venue": venue,
                    "year": year,
                    "n_papers": cell.n_papers,
                    "n_with_code": cell.n_with_code,
                    "rate": cell.rate,
                }
                for (venue, year), cell in availability["cells"].items()
            ],
            "venues": [
                {
                    "venue": venue,
                    "n_papers": cell.n_papers,
                    "n_with_code": cell.n_with_code,
                    "rate": cell.rate,
                }
                for venue, cell in availability["venues"].items()
            ],
            "overall": {
                "n_papers": availability["overall"].n_papers,
                "n_with_code": availability["overall"].n_with_code,
                "rate": availability["overall"].rate,
            },
        },
        "distributions": distributions,
        "medians": {"stars": star_medians, "forks": fork_medians},
        "tests": {
            "stars": _metric_tests(stars),
            "forks": _metric_tests(forks),
            "spearman_star_fork_medians": spearman,
        },
        "top_repositories": [
            {"url": r.normalized_url, "stars": r.stars}
            for r in sorted(
                (r for r in repos if r.stars is not None),
                key=lambda r: (-r.stars, r.normalized_url),
            )[:10]
        ],
        "keyphrases": [
            {"term": term, "count": count}
            for term, count in keyphrase_frequencies(abstracts, config.keyphrase_top_k)
        ]
        if abstracts
        else [],
        "readme_categories": _category_shares(labeled),
    }
    report_path = _artifact(config, "report.json")
    _write_lines(report_path, [json.dumps(report, sort_keys=True, indent=2)])
    manifest = _manifest(
        config,
        "stats",
        inputs,
        [report_path],
        {
            "papers": availability["overall"].n_papers,
            "positives": availability["overall"].n_with_code,
            "repos": len(repos),
        },
    )
    manifest.started_at = started
    manifest.finished_at = now_iso()
    return manifest


# -- report ----------------------------------------------------------------------

def _csv_lines(rows):
    out = []
    for row in rows:
        out.append(",".join(_csv_cell(value) for value in row))
    return out


def _csv_cell(value):
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def stage_report(config: PipelineConfig) -> RunManifest:
    started = now_iso()
    inputs = require_inputs("report", config.out_dir)
    with open(_artifact(config, "report.json"), encoding="utf-8") as fh:
        report = json.load(fh)
    outputs = []

    availability_rows = [("venue", "year", "n_papers", "n_with_code", "rate")]
    for cell in report["availability"]["cells"]:
        availability_rows.append(
            (cell["venue"], cell["year"], cell["n_papers"], cell["n_with_code"], cell["rate"])
        )
    overall = report["availability"]["overall"]
    availability_rows.append(
        ("ALL", "", overall["n_papers"], overall["n_with_code"], overall["rate"])
    )
    path = _artifact(config, "availability.csv")
    _write_lines(path, _csv_lines(availability_rows))
    outputs.append(path)

    for name, table in (
        ("platforms", report["distributions"]["platforms"]),
        ("languages", report["distributions"]["languages"]),
    ):
        rows = [(name[:-1], "share")]
        for key, share in sorted(table.items()):
            rows.append((key, share))
        path = _artifact(config, f"{name}.csv")
        _write_lines(path, _csv_lines(rows))
        outputs.append(path)

    medians_rows = [("venue", "median_stars", "median_forks")]
    stars = report["medians"]["stars"]
    forks = report["medians"]["forks"]
    for venue in sorted(set(stars) | set(forks)):
        medians_rows.append((venue, stars.get(venue, ""), forks.get(venue, "")))
    path = _artifact(config, "medians.csv")
    _write_lines(path, _csv_lines(medians_rows))
    outputs.append(path)

    top_rows = [("repository_url", "stars")]
    for entry in report["top_repositories"]:
        top_rows.append((entry["url"], entry["stars"]))
    path = _artifact(config, "top_repositories.csv")
    _write_lines(path, _csv_lines(top_rows))
    outputs.append(path)

    categories = report["readme_categories"]
    rows = [("category", "unit_share", "file_share")]
    for category in sorted(categories["unit_share"]):
        rows.append(
            (
                category,
                categories["unit_share"][category],
                categories["file_share"][category],
            )
        )
    path = _artifact(config, "categories.csv")
    _write_lines(path, _csv_lines(rows))
    outputs.append(path)

    keyphrase_rows = [("term", "count")]
    for entry in report["keyphrases"]:
        keyphrase_rows.append((entry["term"], entry["count"]))
    path = _artifact(config, "keyphrases.csv")
    _write_lines(path, _csv_lines(keyphrase_rows))
    outputs.append(path)

    manifest = _manifest(
        config, "report", inputs, outputs, {"tables": len(outputs)}
    )
    manifest.started_at = started
    manifest.finished_at = now_iso()
    return manifest


# -- orchestration ------------------------------------------------------------------

_STAGE_FUNCTIONS = {
    "ingest": stage_ingest,
    "extract": stage_extract,
    "classify": stage_classify,
    "probe": stage_probe,
    "readme": stage_readme,
    "stats": stage_stats,
    "report": stage_report,
}


def run_stage(stage: str, config: PipelineConfig) -> RunManifest:
    """Run one stage, persist its manifest, and return it."""
    if stage not in _STAGE_FUNCTIONS:
        raise ValueError(f"unknown stage {stage!r} (expected one of {STAGES})")
    manifest = _STAGE_FUNCTIONS[stage](config)
    manifest.save(os.path.join(config.out_dir, "manifests"))
    if manifest.failures:
        raise StageFailure(
            f"stage {stage} had {len(manifest.failures)} item failures", manifest
        )
    return manifest


def run_all(config: PipelineConfig) -> list:
    """Run every stage in DAG order, stopping at the first failure."""
    manifests = []
    for stage in STAGES:
        manifests.append(run_stage(stage, config))
    return manifests
