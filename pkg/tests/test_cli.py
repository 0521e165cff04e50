import json
from pathlib import Path

import pytest

from almint import hgio
from almint.cli import main
from almint.constructions import StarMap

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConstructAndVerify:
    def test_build_then_verify_succeeds(self, tmp_path, capsys):
        out = tmp_path / "l35.hg"
        code, stdout, _ = run(capsys, "construct", "l-family", "--k", "3", "--s", "5", "-o", str(out))
        assert code == 0
        summary = json.loads(stdout)
        assert summary["total_instances"] == 36
        assert summary["predicted_disjoint_range"] == [5, 5]

        code, stdout, _ = run(capsys, "verify", str(out), "--a", "5", "--b", "5")
        assert code == 0
        assert json.loads(stdout)["holds"] is True

    def test_verify_failure_exits_1_with_witnesses(self, tmp_path, capsys):
        star = tmp_path / "star.hg"
        star.write_text("2 5 4\n1 2\n1 3\n1 4\n1 5\n")
        code, stdout, _ = run(capsys, "verify", str(star), "--a", "1", "--b", "5")
        assert code == 1
        payload = json.loads(stdout)
        assert payload["holds"] is False
        assert payload["witnesses"][0]["count"] == 0

    def test_verify_t_subcommand(self, tmp_path, capsys):
        fam = tmp_path / "pairs.hg"
        fam.write_text("2 4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")
        code, stdout, _ = run(capsys, "verify-t", str(fam), "--a", "5", "--b", "5", "--t", "2")
        assert code == 0

    def test_construct_without_output_prints_hg(self, capsys):
        code, stdout, _ = run(capsys, "construct", "k2e", "--s", "2")
        assert code == 0
        fam = hgio.loads(stdout)
        assert fam.num_distinct == 7

    def test_construct_mf_with_map_file(self, tmp_path, capsys):
        table = tmp_path / "map.json"
        table.write_text(json.dumps(StarMap.constant(3, 2).to_json_table()))
        out = tmp_path / "mf.hg"
        code, _, _ = run(capsys, "construct", "mf", "--k", "3", "--s", "2",
                         "--map", str(table), "-o", str(out))
        assert code == 0
        assert hgio.load(str(out)).num_distinct == 18

    def test_construct_mf_seeded_is_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.hg", tmp_path / "b.hg"
        run(capsys, "construct", "mf", "--k", "3", "--s", "2", "--seed", "4", "-o", str(a))
        run(capsys, "construct", "mf", "--k", "3", "--s", "2", "--seed", "4", "-o", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_missing_required_params_exit_2(self, capsys):
        code, _, err = run(capsys, "construct", "l-family", "--s", "5")
        assert code == 2
        assert "requires" in err

    def test_capacity_override_via_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("ALMINT_MAX_VERTICES", "8")
        code, _, err = run(capsys, "construct", "complete", "--n", "12", "--k", "3",
                           "-o", str(tmp_path / "c.hg"))
        assert code == 2
        assert "bound" in err


class TestErrorPaths:
    def test_missing_file_exits_2(self, capsys):
        code, _, err = run(capsys, "verify", "/nonexistent.hg", "--a", "0", "--b", "1")
        assert code == 2

    def test_malformed_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.hg"
        bad.write_text("2 4 1\n3 2\n")
        code, _, err = run(capsys, "analyze", str(bad))
        assert code == 2
        assert "ascending" in err

    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "x.hg", "--a", "0", "--b", "1", "--bogus"])
        assert exc.value.code == 2


class TestAb:
    def test_lex_trace_on_double_stars(self, tmp_path, capsys):
        out = tmp_path / "l35.hg"
        run(capsys, "construct", "l-family", "--k", "3", "--s", "5", "-o", str(out))
        code, stdout, _ = run(capsys, "ab", str(out), "--lex")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["skew_cross_intersecting"] is True
        assert payload["certificate_bound"] == 20
        assert payload["steps"] <= 20
        assert sum(payload["eliminated_per_step"]) == 36

    def test_isolated_instance_exits_1(self, tmp_path, capsys):
        star = tmp_path / "star.hg"
        star.write_text("2 4 3\n1 2\n1 3\n1 4\n")
        code, stdout, _ = run(capsys, "ab", str(star))
        assert code == 1
        assert json.loads(stdout)["error"] == "isolated-instance"

    def test_seeded_trace_is_stable(self, tmp_path, capsys):
        out = tmp_path / "m.hg"
        run(capsys, "construct", "mstar", "--k", "2", "--s", "2", "-o", str(out))
        _, first, _ = run(capsys, "ab", str(out), "--seed", "3")
        _, second, _ = run(capsys, "ab", str(out), "--seed", "3")
        assert first == second


class TestSunflowerCli:
    def test_decomposition_report_and_cores(self, tmp_path, capsys):
        fam = tmp_path / "l35.hg"
        cores = tmp_path / "cores.hg"
        run(capsys, "construct", "l-family", "--k", "3", "--s", "5", "-o", str(fam))
        code, stdout, _ = run(capsys, "sunflower", str(fam), "--r", "2",
                              "--threshold", "7", "--emit-cores", str(cores))
        assert code == 0
        payload = json.loads(stdout)
        assert payload["sunflowers"] == 15
        assert payload["leftover"] == 6
        assert payload["core_bound"]["all_within_bound"] is True
        parsed = hgio.load(str(cores))
        assert parsed.k == 2
        assert parsed.total_instances == 15

    def test_multiplicities_collapsed(self, tmp_path, capsys):
        fam = tmp_path / "m.hg"
        run(capsys, "construct", "mstar", "--k", "2", "--s", "3", "-o", str(fam))
        code, stdout, _ = run(capsys, "sunflower", str(fam), "--r", "2", "--threshold", "3")
        assert code == 0
        assert json.loads(stdout)["collapsed_multiplicities"] is True

    def test_coarse_threshold_flag(self, tmp_path, capsys):
        fam = tmp_path / "l.hg"
        run(capsys, "construct", "l-family", "--k", "2", "--s", "5", "-o", str(fam))
        code, stdout, _ = run(capsys, "sunflower", str(fam), "--r", "2", "--paper-threshold")
        assert code == 0
        assert json.loads(stdout)["threshold"] == 2 ** 2 * 2 ** 2

    def test_threshold_flags_are_exclusive(self, tmp_path, capsys):
        fam = tmp_path / "l.hg"
        run(capsys, "construct", "l-family", "--k", "2", "--s", "5", "-o", str(fam))
        code, _, err = run(capsys, "sunflower", str(fam), "--r", "2",
                           "--threshold", "5", "--paper-threshold")
        assert code == 2
        assert "exclusive" in err


class TestSearchCli:
    def test_search_report_embeds_hg_payloads(self, capsys):
        code, stdout, _ = run(capsys, "search", "--k", "2", "--a", "1", "--b", "1",
                              "--max-n", "6", "--max-edges", "8")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["max_edges"] == 6
        assert payload["complete"] is True
        family = hgio.loads(payload["extremal_families"][0]["hg"])
        assert family.num_distinct == 6

    def test_oracle_engine_flag(self, capsys):
        code, stdout, _ = run(capsys, "search", "--k", "2", "--a", "1", "--b", "1",
                              "--max-n", "4", "--max-edges", "6", "--oracle")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["engine"] == "oracle"
        assert payload["max_edges"] == 6

    def test_search_plot_written(self, tmp_path, capsys):
        figure = tmp_path / "extremal.png"
        code, _, _ = run(capsys, "search", "--k", "2", "--a", "1", "--b", "1",
                         "--max-n", "4", "--max-edges", "6", "--plot", str(figure))
        assert code == 0
        assert figure.stat().st_size > 0

    def test_reports_are_byte_identical_across_runs(self, capsys):
        argv = ("search", "--k", "2", "--a", "0", "--b", "2",
                "--max-n", "5", "--max-edges", "9")
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second


class TestClaimCli:
    def test_matching_verdict_controls_exit_code(self, capsys):
        code, stdout, _ = run(capsys, "claim", "--claim", "thm4.1", "--s", "1")
        assert code == 1
        payload = json.loads(stdout)
        assert payload["observed_max"] == 6
        assert payload["matches"] is False
        assert payload["s_within_theorem_range"] is False

    def test_unknown_claim_exits_2(self, capsys):
        code, _, err = run(capsys, "claim", "--claim", "thm7.7", "--s", "1")
        assert code == 2
        assert "unknown claim" in err


class TestAnalyze:
    @pytest.mark.parametrize(
        "golden, build",
        [
            ("analyze_l_3_5.json",
             ("construct", "l-family", "--k", "3", "--s", "5")),
            ("analyze_mstar_2_3.json",
             ("construct", "mstar", "--k", "2", "--s", "3")),
        ],
    )
    def test_reports_byte_match_goldens(self, tmp_path, capsys, golden, build):
        fam = tmp_path / "fam.hg"
        run(capsys, *build, "-o", str(fam))
        out = tmp_path / "report.json"
        code, _, _ = run(capsys, "analyze", str(fam), "-o", str(out))
        assert code == 0
        assert out.read_bytes() == (DATA / golden).read_bytes()

    def test_filled_family_golden(self, tmp_path, capsys):
        table = tmp_path / "map.json"
        table.write_text(json.dumps(StarMap.constant(3, 5).to_json_table()))
        fam = tmp_path / "fam.hg"
        run(capsys, "construct", "filled-mf", "--k", "3", "--s", "5",
            "--map", str(table), "-o", str(fam))
        out = tmp_path / "report.json"
        code, _, _ = run(capsys, "analyze", str(fam), "-o", str(out))
        assert code == 0
        assert out.read_bytes() == (DATA / "analyze_filled_mf_3_5.json").read_bytes()

    def test_reports_are_run_to_run_identical(self, tmp_path, capsys):
        fam = tmp_path / "fam.hg"
        run(capsys, "construct", "complete", "--n", "7", "--k", "3", "-o", str(fam))
        _, first, _ = run(capsys, "analyze", str(fam))
        _, second, _ = run(capsys, "analyze", str(fam))
        assert first == second

    def test_plot_written_next_to_report(self, tmp_path, capsys):
        fam = tmp_path / "fam.hg"
        figure = tmp_path / "fig.png"
        run(capsys, "construct", "l-family", "--k", "2", "--s", "3", "-o", str(fam))
        code, stdout, _ = run(capsys, "analyze", str(fam), "--plot", str(figure))
        assert code == 0
        assert figure.stat().st_size > 0
        assert json.loads(stdout)["figure"] == str(figure)

    def test_text_format(self, tmp_path, capsys):
        fam = tmp_path / "fam.hg"
        run(capsys, "construct", "k2e", "--s", "1", "-o", str(fam))
        code, stdout, _ = run(capsys, "analyze", str(fam), "--format", "text")
        assert code == 0
        assert stdout.startswith("almost_intersecting_range:")

    def test_empty_family_analyzes_cleanly(self, tmp_path, capsys):
        empty = tmp_path / "empty.hg"
        empty.write_text("3 0 0\n")
        code, stdout, _ = run(capsys, "analyze", str(empty))
        assert code == 0
        payload = json.loads(stdout)
        assert payload["total_instances"] == 0
        assert payload["degree_histogram"] == {}


class TestRoundTripThroughCli:
    @pytest.mark.parametrize(
        "build",
        [
            ("construct", "l-family", "--k", "4", "--s", "2"),
            ("construct", "mstar", "--k", "3", "--s", "2"),
            ("construct", "complete", "--n", "8", "--k", "4"),
            ("construct", "k2e", "--s", "5"),
            ("construct", "mf", "--k", "3", "--s", "3", "--seed", "12"),
            ("construct", "filled-mf", "--k", "4", "--s", "1", "--seed", "2"),
        ],
        ids=lambda b: b[1] if isinstance(b, tuple) else str(b),
    )
    def test_written_families_reparse_identically(self, tmp_path, capsys, build):
        path = tmp_path / "fam.hg"
        code, _, _ = run(capsys, *build, "-o", str(path))
        assert code == 0
        family = hgio.load(str(path))
        again = tmp_path / "again.hg"
        hgio.save(family, str(again))
        assert path.read_bytes() == again.read_bytes()
