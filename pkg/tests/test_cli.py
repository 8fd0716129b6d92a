"""End-to-end command line behavior, run in process through main()."""

import gzip
import json

import pytest

from ldtruth.cli import main

SYNTH_FLAGS = ["--sources", "10", "--entities", "30", "--conflicts", "40",
               "--seed", "6"]


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    assert main(["synth", *SYNTH_FLAGS, "--out", str(out)]) == 0
    return out


class TestSynthCommand:

    def test_outputs_and_manifest(self, corpus_dir):
        assert (corpus_dir / "corpus.nt").exists()
        assert (corpus_dir / "gold.tsv").exists()
        manifest = json.loads((corpus_dir / "manifest.json").read_text())
        assert manifest["seed"] == 6
        assert manifest["n_sources"] == 10
        assert manifest["gold_slots"] > 0

    def test_rerun_is_byte_identical(self, corpus_dir, tmp_path):
        again = tmp_path / "again"
        assert main(["synth", *SYNTH_FLAGS, "--out", str(again)]) == 0
        for name in ("corpus.nt", "gold.tsv", "manifest.json"):
            assert (again / name).read_bytes() == \
                (corpus_dir / name).read_bytes()

    def test_impossible_shape_fails_cleanly(self, tmp_path, capsys):
        code = main(["synth", "--sources", "2", "--values", "5",
                     "--out", str(tmp_path / "x")])
        assert code == 1
        assert "ERROR" in capsys.readouterr().err


class TestConfigPrecedence:

    def test_flag_beats_file_beats_default(self, tmp_path):
        cfgfile = tmp_path / "settings.ini"
        cfgfile.write_text("[synth]\nseed = 9\nn_sources = 10\n"
                           "n_entities = 30\nn_conflict_predicates = 40\n")

        def seed_of(out):
            return json.loads((out / "manifest.json").read_text())["seed"]

        from_file = tmp_path / "o1"
        assert main(["synth", "--config", str(cfgfile),
                     "--out", str(from_file)]) == 0
        assert seed_of(from_file) == 9

        from_flag = tmp_path / "o2"
        assert main(["synth", "--config", str(cfgfile), "--seed", "11",
                     "--out", str(from_flag)]) == 0
        assert seed_of(from_flag) == 11

        from_default = tmp_path / "o3"
        assert main(["synth", "--sources", "10", "--entities", "30",
                     "--conflicts", "40", "--out", str(from_default)]) == 0
        assert seed_of(from_default) == 0

    def test_file_sets_engine_cap_and_flag_overrides(self, corpus_dir,
                                                     tmp_path):
        cfgfile = tmp_path / "engine.ini"
        cfgfile.write_text("[engine]\nouter_max = 1\n")
        capped = main(["resolve", "--input", str(corpus_dir / "corpus.nt"),
                       "--config", str(cfgfile), "--out", str(tmp_path / "a")])
        assert capped == 2
        freed = main(["resolve", "--input", str(corpus_dir / "corpus.nt"),
                      "--config", str(cfgfile), "--outer-max", "20",
                      "--out", str(tmp_path / "b")])
        assert freed == 0


class TestResolveCommand:

    def test_output_files(self, corpus_dir, tmp_path):
        out = tmp_path / "res"
        code = main(["resolve", "--input", str(corpus_dir / "corpus.nt"),
                     "--out", str(out)])
        assert code == 0
        records = [json.loads(line) for line in
                   (out / "decisions.jsonl").read_text().splitlines()]
        assert records
        for record in records:
            assert {"entity", "predicate", "chosen", "objects",
                    "method"} <= set(record)
            assert record["method"] == "ldtruth"
            assert record["chosen"]["kind"] in {"number", "date", "text",
                                                "reference"}
            for obj in record["objects"]:
                assert obj["sources"]
                assert 0.0 <= obj["tau"] <= 1.0
        trace = (out / "trace.csv").read_text().splitlines()
        assert trace[0] == "iteration,mean_delta_tau,max_delta_tau"
        assert len(trace) == 1 + records[0]["iterations"]
        trust = (out / "source_trust.tsv").read_text().splitlines()
        assert trust[0] == "source\tt\tt_smoothed\tnbr"
        assert all(len(line.split("\t")) == 4 for line in trust[1:])

    def test_thread_count_never_changes_output(self, corpus_dir, tmp_path):
        lines = (corpus_dir / "corpus.nt").read_text().splitlines()
        half = len(lines) // 2
        part_a = tmp_path / "part_a.nt"
        part_b = tmp_path / "part_b.nt"
        part_a.write_text("\n".join(lines[:half]) + "\n")
        part_b.write_text("\n".join(lines[half:]) + "\n")
        outs = []
        for threads in ("1", "4"):
            out = tmp_path / f"threads_{threads}"
            code = main(["resolve", "--input", str(part_a), str(part_b),
                         "--threads", threads, "--out", str(out)])
            assert code == 0
            outs.append(out)
        for name in ("decisions.jsonl", "trace.csv", "source_trust.tsv"):
            assert (outs[0] / name).read_bytes() == \
                (outs[1] / name).read_bytes()

    def test_gzip_input_matches_plain(self, corpus_dir, tmp_path):
        packed = tmp_path / "corpus.nt.gz"
        packed.write_bytes(gzip.compress(
            (corpus_dir / "corpus.nt").read_bytes()))
        plain_out = tmp_path / "plain"
        packed_out = tmp_path / "packed"
        assert main(["resolve", "--input", str(corpus_dir / "corpus.nt"),
                     "--out", str(plain_out)]) == 0
        assert main(["resolve", "--input", str(packed),
                     "--out", str(packed_out)]) == 0
        assert (plain_out / "decisions.jsonl").read_bytes() == \
            (packed_out / "decisions.jsonl").read_bytes()

    def test_outer_cap_reports_nonconvergence(self, corpus_dir, tmp_path):
        code = main(["resolve", "--input", str(corpus_dir / "corpus.nt"),
                     "--outer-max", "1", "--outer-threshold", "1e-9",
                     "--out", str(tmp_path / "cap")])
        assert code == 2

    def test_zero_threads_rejected(self, corpus_dir, tmp_path, capsys):
        code = main(["resolve", "--input", str(corpus_dir / "corpus.nt"),
                     "--threads", "0", "--out", str(tmp_path / "x")])
        assert code == 1
        assert "threads" in capsys.readouterr().err


class TestParseDiagnostics:

    @staticmethod
    def mixed_file(tmp_path):
        path = tmp_path / "mixed.nt"
        path.write_text(
            '<http://a.example/s> <http://a.example/p> "ok" .\n'
            "this line is not a triple\n"
            '<http://a.example/s> <http://a.example/q> "fine" .\n')
        return path

    def test_lenient_mode_warns_with_location(self, tmp_path, capsys):
        path = self.mixed_file(tmp_path)
        code = main(["resolve", "--input", str(path),
                     "--out", str(tmp_path / "o")])
        assert code == 0
        assert f"WARN {path}:2 " in capsys.readouterr().err

    def test_strict_mode_aborts(self, tmp_path, capsys):
        path = self.mixed_file(tmp_path)
        code = main(["resolve", "--input", str(path), "--strict",
                     "--out", str(tmp_path / "o")])
        assert code == 1
        assert "ERROR" in capsys.readouterr().err


class TestPriorCommand:

    def test_ranked_output_and_graph_dump(self, corpus_dir, tmp_path):
        out = tmp_path / "prior"
        sbg_path = tmp_path / "sbg.tsv"
        code = main(["prior", "--input", str(corpus_dir / "corpus.nt"),
                     "--out", str(out), "--sbg-out", str(sbg_path)])
        assert code == 0
        lines = (out / "prior.tsv").read_text().splitlines()
        assert lines[0] == "source\tbr\tnbr"
        scores = [float(line.split("\t")[1]) for line in lines[1:]]
        assert scores == sorted(scores, reverse=True)
        assert sbg_path.read_text().startswith("from\tto\tmultiplicity\n")

    def test_no_identity_links_is_fatal(self, tmp_path, capsys):
        path = tmp_path / "plain.nt"
        path.write_text('<http://a.example/s> <http://a.example/p> "x" .\n')
        code = main(["prior", "--input", str(path),
                     "--out", str(tmp_path / "o")])
        assert code == 1
        assert "identity links" in capsys.readouterr().err


class TestBaselineCommand:

    @pytest.mark.parametrize("method", ["vote", "truthfinder"])
    def test_writes_decisions(self, corpus_dir, tmp_path, method):
        out = tmp_path / method
        code = main(["baseline", "--input", str(corpus_dir / "corpus.nt"),
                     "--method", method, "--out", str(out)])
        assert code == 0
        records = [json.loads(line) for line in
                   (out / "decisions.jsonl").read_text().splitlines()]
        assert records
        assert all(record["method"] == method for record in records)


class TestEvalCommand:

    def test_report_structure(self, tmp_path, capsys):
        out = tmp_path / "eval"
        code = main(["eval", *SYNTH_FLAGS, "--seeds", "0,1",
                     "--methods", "ldtruth,vote", "--out", str(out)])
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["seeds"] == [0, 1]
        assert len(report["rows"]) == 2
        assert 0.0 <= report["mean_ldtruth"] <= 1.0
        assert 0.0 <= report["mean_vote"] <= 1.0
        assert "mean" in capsys.readouterr().out
