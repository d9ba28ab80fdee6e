"""Pipeline stages end to end over the planted 40-paper corpus."""

import json
import os

import pytest

from srcmine.cli import main as cli_main
from srcmine.pipeline.config import ConfigError, PipelineConfig, load_config
from srcmine.pipeline.manifest import DependencyError
from srcmine.pipeline.stages import (
    run_stage,
    stage_classify,
    stage_extract,
    stage_ingest,
)
from srcmine.probe.cache import ProbeCache
from srcmine.probe.records import RepoRecord, utc_now_iso
from tests.corpusfixture import build_corpus

# planted repo metadata for the 8 positive papers' repositories
PLANTED_REPOS = [
    # (stars, forks, language)
    (17, 5, "Python"),
    (30, 7, "Python"),
    (113, 26, "C++"),
    (71, 18, "Python"),
    (20, 5, None),
    (63, 14, "Python"),
    (73, 18, None),
    (24, 7, "Python"),
]

README_TEMPLATE = (
    "# Project {i}\nIntro for project {i} with enough words to look real.\n"
    "## Installation\npip install project{i}\n"
    "## Usage\nrun project{i} --help\n"
    "## Citation\nplease cite paper {i}\n"
)


def _write_corpus(tmp_path):
    lines, expectations = build_corpus()
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text("\n".join(lines) + "\n")
    return corpus, expectations


def _seed_cache(cache_dir):
    """Warm cache so the probe stage never needs the network."""
    os.makedirs(os.path.join(cache_dir, "readmes"), exist_ok=True)
    cache = ProbeCache(os.path.join(cache_dir, "probe.jsonl"))
    now = utc_now_iso()
    for i, (stars, forks, language) in enumerate(PLANTED_REPOS):
        readme_name = f"fixture{i}.md"
        with open(os.path.join(cache_dir, "readmes", readme_name), "w") as fh:
            fh.write(README_TEMPLATE.format(i=i))
        cache.put(
            RepoRecord(
                normalized_url=f"https://github.com/lab{i}/project{i}",
                platform="GitHub",
                accessibility="accessible",
                http_status=200,
                checked_at=now,
                stars=stars,
                forks=forks,
                primary_language=language,
                readme_ref=readme_name,
            )
        )


@pytest.fixture()
def pipeline_env(tmp_path):
    corpus, expectations = _write_corpus(tmp_path)
    cache_dir = tmp_path / "cache"
    _seed_cache(str(cache_dir))
    config = PipelineConfig(
        corpus_path=str(corpus),
        out_dir=str(tmp_path / "out"),
        cache_dir=str(cache_dir),
        seed=1,
        jobs=2,
    )
    return config, expectations


def _read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


STAGE_ORDER = ("ingest", "extract", "classify", "probe", "readme", "stats", "report")


def _run_pipeline(config):
    return [run_stage(stage, config) for stage in STAGE_ORDER]


class TestEndToEnd:
    def test_full_run_counters_and_artifacts(self, pipeline_env):
        config, expectations = pipeline_env
        manifests = _run_pipeline(config)
        by_stage = {m.stage: m for m in manifests}
        assert by_stage["ingest"].counters == {"papers": 40, "manual": 0}
        expected_mentions = sum(len(e["mention_urls"]) for e in expectations.values())
        assert by_stage["extract"].counters["mentions"] == expected_mentions
        assert by_stage["classify"].counters["positives"] == 8
        assert by_stage["probe"].counters == {"probes": 8, "failed": 0}
        assert by_stage["readme"].counters["files"] == 8
        for name in (
            "documents.jsonl", "mentions.jsonl", "verdicts.jsonl", "repos.jsonl",
            "units.jsonl", "labeled_units.jsonl", "report.json",
            "availability.csv", "medians.csv",
        ):
            assert os.path.exists(os.path.join(config.out_dir, name)), name

    def test_mention_sets_exact(self, pipeline_env):
        config, expectations = pipeline_env
        run_stage("ingest", config)
        run_stage("extract", config)
        mentions = _read_jsonl(os.path.join(config.out_dir, "mentions.jsonl"))
        by_paper = {}
        for m in mentions:
            by_paper.setdefault(m["paper_id"], []).append(m["normalized_url"])
        for paper_id, expected in expectations.items():
            assert by_paper.get(paper_id, []) == expected["mention_urls"], paper_id
        # none of the reference-section URLs leak through
        assert all("refs.example.org" not in url
                   for urls in by_paper.values() for url in urls)

    def test_verdicts_correct_for_all_40(self, pipeline_env):
        config, expectations = pipeline_env
        for stage in ("ingest", "extract", "classify"):
            run_stage(stage, config)
        verdicts = _read_jsonl(os.path.join(config.out_dir, "verdicts.jsonl"))
        assert len(verdicts) == 40
        for v in verdicts:
            assert v["has_available_code"] == expectations[v["paper_id"]]["positive"], v["paper_id"]

    def test_availability_table_matches_planted_rates(self, pipeline_env):
        config, expectations = pipeline_env
        _run_pipeline(config)
        report = json.loads(open(os.path.join(config.out_dir, "report.json")).read())
        overall = report["availability"]["overall"]
        assert overall == {"n_papers": 40, "n_with_code": 8, "rate": 8 / 40}
        planted = {}
        for e in expectations.values():
            key = (e["venue"], e["year"])
            n, k = planted.get(key, (0, 0))
            planted[key] = (n + 1, k + int(e["positive"]))
        for cell in report["availability"]["cells"]:
            n, k = planted[(cell["venue"], cell["year"])]
            assert (cell["n_papers"], cell["n_with_code"]) == (n, k)
            assert cell["rate"] == k / n

    def test_probe_completed_from_cache_offline(self, pipeline_env):
        config, _ = pipeline_env
        for stage in ("ingest", "extract", "classify", "probe"):
            run_stage(stage, config)
        repos = _read_jsonl(os.path.join(config.out_dir, "repos.jsonl"))
        assert len(repos) == 8
        assert all(r["accessibility"] == "accessible" for r in repos)
        stars = {r["normalized_url"]: r["stars"] for r in repos}
        for i, (planted_stars, _, _) in enumerate(PLANTED_REPOS):
            assert stars[f"https://github.com/lab{i}/project{i}"] == planted_stars

    def test_report_statistics_content(self, pipeline_env):
        config, _ = pipeline_env
        _run_pipeline(config)
        report = json.loads(open(os.path.join(config.out_dir, "report.json")).read())
        # language shares over accessible GitHub repos: 5 Python, 1 C++, 2 None
        assert report["distributions"]["languages"] == {
            "C++": 1 / 8, "Others": 2 / 8, "Python": 5 / 8,
        }
        assert report["distributions"]["inaccessible_rate"] == 0.0
        # venue medians from planted stars
        assert report["medians"]["stars"] == {
            "ACL": 40.0, "CVPR": 51.5, "ICLR": 68.5, "ICML": 71, "NeurIPS": 20,
        }
        spearman = report["tests"]["spearman_star_fork_medians"]
        assert spearman["method"] == "spearman"
        assert -1.0 <= spearman["statistic"] <= 1.0
        # keyphrases come from positive papers' abstracts
        terms = {k["term"] for k in report["keyphrases"]}
        assert "dataset" in terms
        # README categories: every fixture file has the same four headers
        shares = report["readme_categories"]
        assert shares["n_files"] == 8
        assert shares["file_share"]["Installation"] == 1.0
        assert shares["file_share"]["Usage"] == 1.0
        assert shares["file_share"]["Citation"] == 1.0

    def test_idempotent_reruns_byte_identical(self, pipeline_env):
        config, _ = pipeline_env
        _run_pipeline(config)
        targets = [
            "documents.jsonl", "mentions.jsonl", "verdicts.jsonl",
            "repos.jsonl", "units.jsonl", "labeled_units.jsonl",
            "report.json", "availability.csv",
        ]
        before = {
            name: open(os.path.join(config.out_dir, name), "rb").read()
            for name in targets
        }
        _run_pipeline(config)
        for name in targets:
            after = open(os.path.join(config.out_dir, name), "rb").read()
            assert after == before[name], f"{name} changed across reruns"

    def test_stage_isolation_rebuild_deleted_artifact(self, pipeline_env):
        config, _ = pipeline_env
        _run_pipeline(config)
        mentions_path = os.path.join(config.out_dir, "mentions.jsonl")
        original = open(mentions_path, "rb").read()
        os.remove(mentions_path)
        run_stage("extract", config)
        assert open(mentions_path, "rb").read() == original

    def test_dependency_error_names_stage(self, pipeline_env, tmp_path):
        config, _ = pipeline_env
        fresh = PipelineConfig(
            corpus_path=config.corpus_path,
            out_dir=str(tmp_path / "fresh_out"),
            cache_dir=config.cache_dir,
        )
        with pytest.raises(DependencyError, match="classify"):
            run_stage("classify", fresh)

    def test_malformed_lines_routed_to_manual(self, tmp_path, pipeline_env):
        config, _ = pipeline_env
        lines, _ = build_corpus()
        corpus = tmp_path / "broken.jsonl"
        corpus.write_text("\n".join(lines[:5]) + "\nnot json at all\n")
        config.corpus_path = str(corpus)
        manifest = stage_ingest(config)
        assert manifest.counters == {"papers": 5, "manual": 1}
        manual = _read_jsonl(os.path.join(config.out_dir, "manual.jsonl"))
        assert manual[0]["line_number"] == 6


class TestRunAll:
    def test_api_runs_every_stage_in_order(self, pipeline_env):
        from srcmine.pipeline.stages import run_all

        config, _ = pipeline_env
        manifests = run_all(config)
        assert [m.stage for m in manifests] == list(STAGE_ORDER)

    def test_stops_at_first_failure(self, pipeline_env, tmp_path):
        from srcmine.pipeline.stages import run_all

        config, _ = pipeline_env
        config.corpus_path = str(tmp_path / "missing.jsonl")
        with pytest.raises(FileNotFoundError):
            run_all(config)
        assert not os.path.exists(os.path.join(config.out_dir, "documents.jsonl"))


class TestManifests:
    def test_load_manifest_round_trip(self, pipeline_env):
        from srcmine.pipeline.manifest import load_manifest

        config, _ = pipeline_env
        saved = run_stage("ingest", config)
        loaded = load_manifest(os.path.join(config.out_dir, "manifests"), "ingest")
        assert loaded.counters == saved.counters
        assert loaded.config_fingerprint == saved.config_fingerprint

    def test_manifest_written_and_chained(self, pipeline_env):
        config, _ = pipeline_env
        run_stage("ingest", config)
        run_stage("extract", config)
        manifest_path = os.path.join(config.out_dir, "manifests", "extract.json")
        manifest = json.loads(open(manifest_path).read())
        documents = os.path.join(config.out_dir, "documents.jsonl")
        assert documents in manifest["inputs"]
        assert manifest["config_fingerprint"] == config.fingerprint()
        assert manifest["started_at"] <= manifest["finished_at"]

    def test_counters_match_direct_module_calls(self, pipeline_env):
        config, _ = pipeline_env
        stage_ingest(config)
        manifest = stage_extract(config)
        from srcmine.ingest.schema import document_from_payload
        from srcmine.ingest.urls import extract_url_mentions

        documents = [
            document_from_payload(d)
            for d in _read_jsonl(os.path.join(config.out_dir, "documents.jsonl"))
        ]
        direct = sum(len(extract_url_mentions(d)) for d in documents)
        assert manifest.counters["mentions"] == direct


class TestConfig:
    def test_precedence_flags_env_file(self, tmp_path, monkeypatch):
        config_file = tmp_path / "config.json"
        config_file.write_text(json.dumps({"seed": 1, "jobs": 2, "out_dir": "from_file"}))
        monkeypatch.setenv("SRCMINE_JOBS", "5")
        config = load_config(path=str(config_file), overrides={"seed": 9})
        assert config.seed == 9          # flag wins
        assert config.jobs == 5          # env beats file
        assert config.out_dir == "from_file"

    def test_unknown_key_rejected(self, tmp_path):
        config_file = tmp_path / "config.json"
        config_file.write_text(json.dumps({"nonsense": 1}))
        with pytest.raises(ConfigError):
            load_config(path=str(config_file))

    def test_mode_validation(self):
        with pytest.raises(ConfigError):
            load_config(overrides={"classifier_mode": "model"})  # no model_path


class TestCli:
    def test_exit_codes(self, pipeline_env, tmp_path):
        config, _ = pipeline_env
        out = str(tmp_path / "cli_out")
        ok = cli_main([
            "ingest", "--corpus", config.corpus_path,
            "--out-dir", out, "--cache-dir", config.cache_dir,
        ])
        assert ok == 0
        missing = cli_main([
            "ingest", "--corpus", str(tmp_path / "nope.jsonl"),
            "--out-dir", out, "--cache-dir", config.cache_dir,
        ])
        assert missing == 1
        bad_config = cli_main([
            "stats", "--config", str(tmp_path / "absent-config.json"),
        ])
        assert bad_config == 2

    def test_run_all_via_cli(self, pipeline_env, capsys):
        config, _ = pipeline_env
        code = cli_main([
            "run-all", "--corpus", config.corpus_path,
            "--out-dir", config.out_dir, "--cache-dir", config.cache_dir,
        ])
        assert code == 0
        printed = capsys.readouterr().out
        for stage in STAGE_ORDER:
            assert f"[{stage}]" in printed
        assert os.path.exists(os.path.join(config.out_dir, "report.json"))

    def test_classify_without_extract_fails_cleanly(self, pipeline_env, tmp_path):
        config, _ = pipeline_env
        code = cli_main([
            "classify", "--out-dir", str(tmp_path / "empty_out"),
            "--cache-dir", config.cache_dir,
        ])
        assert code == 1

    def test_classify_remote_mode(self, pipeline_env):
        import json as json_mod

        from tests.stubserver import StubServer

        config, expectations = pipeline_env
        run_stage("ingest", config)
        run_stage("extract", config)
        with StubServer() as stub:
            def route(method, path, body):
                sentences = json_mod.loads(body)["sentences"]
                results = [
                    {"probability": 0.9 if "release" in s else 0.1,
                     "label": "own_code" if "release" in s else "other"}
                    for s in sentences
                ]
                return (200, {"Content-Type": "application/json"}, {"results": results})

            stub.routes["/classify"] = route
            config.classifier_mode = "remote"
            config.remote_endpoint = stub.url("/classify")
            manifest = run_stage("classify", config)
        assert manifest.counters["positives"] == 8
        verdicts = _read_jsonl(os.path.join(config.out_dir, "verdicts.jsonl"))
        for v in verdicts:
            assert v["has_available_code"] == expectations[v["paper_id"]]["positive"]

    def test_readme_classify_with_trained_model(self, pipeline_env, tmp_path):
        config, _ = pipeline_env
        # labeled dataset: headers determine labels
        rows = []
        for i in range(40):
            label, word = [("Installation", "install"), ("Usage", "usage"),
                           ("Citation", "cite"), ("License", "license")][i % 4]
            rows.append({
                "repo_url": f"https://github.com/x/r{i}", "unit_index": 0,
                "header_text": f"{word} part {i % 3}", "header_level": 2,
                "subtext": f"text about {word}", "labels": [label],
                "non_english": False, "too_simple": False,
                "annotator_ids": [], "round": 1,
            })
        data = tmp_path / "labeled.jsonl"
        data.write_text("\n".join(json.dumps(r) for r in rows))
        model_out = tmp_path / "dual.json"
        assert cli_main([
            "train-readme", "--data", str(data), "--model-out", str(model_out),
            "--epochs", "200", "--out-dir", config.out_dir,
            "--cache-dir", config.cache_dir,
        ]) == 0
        for stage in ("ingest", "extract", "classify", "probe", "readme"):
            run_stage(stage, config)
        assert cli_main([
            "readme-classify", "--model", str(model_out),
            "--out-dir", config.out_dir, "--cache-dir", config.cache_dir,
        ]) == 0
        labeled = _read_jsonl(os.path.join(config.out_dir, "labeled_units.jsonl"))
        by_header = {r["header_text"]: r["labels"] for r in labeled}
        assert by_header["Installation"] == ["Installation"]
        assert by_header["Usage"] == ["Usage"]

    def test_label_export_cli(self, tmp_path, capsys):
        from srcmine.annotation.store import AnnotationStore, LabelSubmission
        from srcmine.readme import analyze_readme

        log = tmp_path / "submissions.jsonl"
        store = AnnotationStore(log_path=str(log))
        doc = analyze_readme(
            "https://github.com/a/b", "# Top\nsome words here\n## Usage\nrun it\n"
        )
        store.create_tasks([doc], ["x", "y"], seed=0)
        for annotator in ("x", "y"):
            while (task := store.next_task(annotator)) is not None:
                store.submit(
                    annotator,
                    LabelSubmission(task_id=task.task_id,
                                    labels=frozenset({"Usage"}), duration_seconds=5),
                )
        out = tmp_path / "dataset.jsonl"
        assert cli_main(["label-export", "--log", str(log), "--out", str(out)]) == 0
        records = [json.loads(line) for line in out.read_text().splitlines() if line.strip()]
        assert len(records) == 2
        assert all(r["labels"] == ["Usage"] for r in records)

    def test_train_sentence_cli(self, tmp_path):
        data = tmp_path / "sentences.jsonl"
        rows = []
        for i in range(30):
            if i % 2 == 0:
                rows.append({"text": f"we release our code at spot {i}", "label": "own_code"})
            else:
                rows.append({"text": f"we thank the authors for baseline {i}", "label": "other"})
        data.write_text("\n".join(json.dumps(r) for r in rows))
        model_out = tmp_path / "model.json"
        code = cli_main([
            "train-sentence", "--data", str(data), "--model-out", str(model_out),
            "--epochs", "120", "--out-dir", str(tmp_path / "o"),
            "--cache-dir", str(tmp_path / "c"),
        ])
        assert code == 0
        assert model_out.exists()
        from srcmine.classify.model import load_model, predict

        model = load_model(model_out)
        assert predict(model, "we release our code at spot 99").label == "own_code"
