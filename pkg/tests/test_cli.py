
import pytest
from click.testing import CliRunner

from qfbias.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args, **kwargs):
    return runner.invoke(main, list(args), catch_exceptions=False, **kwargs)


class TestLimitCommand:
    def test_first_moment_prints_silver_ratio(self, runner):
        result = invoke(runner, "limit", "--form", "1,0,1", "--k", "1")
        assert result.exit_code == 0
        assert result.stdout.strip() == "2.414213562373"

    def test_second_moment(self, runner):
        result = invoke(runner, "limit", "--form", "1,0,1", "--k", "2")
        assert result.stdout.strip() == "4.503876787768"

    def test_polynomial_route(self, runner):
        result = invoke(runner, "limit", "--form", "1,0,1", "--f", "x", "--g", "y")
        assert result.stdout.strip() == "2.414213562373"

    def test_flag_conflict_is_usage_error(self, runner):
        result = runner.invoke(main, ["limit", "--form", "1,0,1", "--k", "1", "--f", "x", "--g", "y"])
        assert result.exit_code == 2

    def test_zero_denominator_is_computation_error(self, runner):
        result = runner.invoke(
            main,
            ["limit", "--form", "1,0,1", "--f", "x^2", "--g", "-x^2 + 2xy + y^2"],
        )
        assert result.exit_code == 3

    def test_bad_form_is_usage_error(self, runner):
        result = runner.invoke(main, ["limit", "--form", "2,4,6", "--k", "1"])
        assert result.exit_code == 2

    def test_bad_polynomial_is_usage_error(self, runner):
        result = runner.invoke(main, ["limit", "--form", "1,0,1", "--f", "x^2 +", "--g", "y"])
        assert result.exit_code == 2


class TestSieveCommand:
    def test_count_to_stdout(self, runner):
        result = invoke(runner, "sieve", "--limit", "30")
        assert result.stdout.strip() == "10"

    def test_writes_primes(self, runner, tmp_path):
        out = tmp_path / "p.txt"
        invoke(runner, "sieve", "--lo", "10", "--hi", "30", "--out", str(out))
        assert out.read_text().split() == ["11", "13", "17", "19", "23", "29"]

    def test_conflicting_flags(self, runner):
        result = runner.invoke(main, ["sieve", "--limit", "5", "--lo", "2", "--hi", "9"])
        assert result.exit_code == 2


class TestRepresentCommand:
    def test_record_count_to_100(self, runner, tmp_path):
        cache = tmp_path / "c.qfr"
        result = invoke(runner, "represent", "--form", "1,0,1", "--limit", "100",
                        "--cache", str(cache))
        assert result.stdout.strip() == "11"
        assert cache.exists()

    def test_no_records_below_five(self, runner, tmp_path):
        cache = tmp_path / "c.qfr"
        result = invoke(runner, "represent", "--form", "1,0,1", "--limit", "4",
                        "--cache", str(cache))
        assert result.stdout.strip() == "0"

    def test_imprimitive_form_rejected(self, runner, tmp_path):
        result = runner.invoke(main, ["represent", "--form", "2,4,6", "--limit", "10",
                                      "--cache", str(tmp_path / "c.qfr")])
        assert result.exit_code == 2

    def test_cache_dir_env(self, runner, tmp_path):
        env = {"QFBIAS_CACHE_DIR": str(tmp_path)}
        result = runner.invoke(main, ["represent", "--form", "1,0,1", "--limit", "50",
                                      "--cache", "sub/c.qfr"], env=env, catch_exceptions=False)
        assert result.exit_code == 0
        assert (tmp_path / "sub" / "c.qfr").exists()

    def test_cache_bytes_identical_across_threads(self, runner, tmp_path):
        c1, c2 = tmp_path / "c1.qfr", tmp_path / "c2.qfr"
        common = ["represent", "--form", "1,0,1", "--limit", "60000"]
        invoke(runner, *common, "--cache", str(c1), "--threads", "1")
        invoke(runner, *common, "--cache", str(c2), "--threads", "2")
        assert c1.read_bytes() == c2.read_bytes()


class TestSeriesCommand:
    def test_pinned_row(self, runner, tmp_path):
        out = tmp_path / "s.csv"
        result = invoke(runner, "series", "--form", "1,0,1", "--mod", "4", "--res", "1",
                        "--nmax", "10", "--stride", "10", "-o", str(out))
        assert result.stdout.strip() == "2.333333333333"
        assert out.read_text() == "N,PrN,sum_a,sum_b,F\n10,29,14,6,2.333333333333\n"

    def test_undefined_class_emits_empty_field(self, runner, tmp_path):
        out = tmp_path / "s.csv"
        result = invoke(runner, "series", "--form", "1,0,1", "--mod", "4", "--res", "3",
                        "--nmax", "10", "--stride", "10", "-o", str(out))
        assert result.stdout.strip() == "undefined"
        assert out.read_text().splitlines()[1].endswith(",0,")

    def test_cache_equals_scratch(self, runner, tmp_path):
        cache = tmp_path / "c.qfr"
        invoke(runner, "represent", "--form", "1,0,1", "--limit", "600", "--cache", str(cache))
        fresh, cached = tmp_path / "fresh.csv", tmp_path / "cached.csv"
        invoke(runner, "series", "--form", "1,0,1", "--mod", "4", "--res", "1",
               "--nmax", "100", "--stride", "25", "-o", str(fresh))
        invoke(runner, "series", "--form", "1,0,1", "--mod", "4", "--res", "1",
               "--nmax", "100", "--stride", "25", "-o", str(cached), "--cache", str(cache))
        assert fresh.read_bytes() == cached.read_bytes()

    def test_cache_form_mismatch_fails(self, runner, tmp_path):
        cache = tmp_path / "c.qfr"
        invoke(runner, "represent", "--form", "1,0,2", "--limit", "600", "--cache", str(cache))
        result = runner.invoke(main, ["series", "--form", "1,0,1", "--mod", "4", "--res", "1",
                                      "--nmax", "100", "-o", str(tmp_path / "s.csv"),
                                      "--cache", str(cache)])
        assert result.exit_code == 3

    def test_missing_cache_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, ["series", "--form", "1,0,1", "--mod", "4", "--res", "1",
                                      "--nmax", "100", "-o", str(tmp_path / "s.csv"),
                                      "--cache", str(tmp_path / "absent.qfr")])
        assert result.exit_code == 2

    def test_unwritable_output_is_io_error(self, runner, tmp_path):
        result = runner.invoke(main, ["series", "--form", "1,0,1", "--mod", "4", "--res", "1",
                                      "--nmax", "10", "--stride", "10",
                                      "-o", str(tmp_path / "no" / "dir" / "s.csv")])
        assert result.exit_code == 4

    def test_nmax_below_stride_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, ["series", "--form", "1,0,1", "--mod", "4", "--res", "1",
                                      "--nmax", "5", "--stride", "100",
                                      "-o", str(tmp_path / "s.csv")])
        assert result.exit_code == 2

    def test_thread_count_does_not_change_bytes(self, runner, tmp_path):
        out1, out2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
        common = ["series", "--form", "1,0,1", "--mod", "8", "--res", "1",
                  "--nmax", "6000", "--stride", "500"]
        invoke(runner, *common, "-o", str(out1), "--threads", "1")
        invoke(runner, *common, "-o", str(out2), "--threads", "2")
        assert out1.read_bytes() == out2.read_bytes()


class TestRatioCommand:
    def test_self_consistent_final_value(self, runner, tmp_path):
        out = tmp_path / "r.csv"
        result = invoke(runner, "ratio", "--form", "1,0,1", "--mod", "8", "--res", "1",
                        "--nmax", "10", "--stride", "10", "-o", str(out))
        assert result.stdout.strip() == "1.714285714286"
        assert out.read_text() == "N,R\n10,1.714285714286\n"

    def test_trivial_class_rejected(self, runner, tmp_path):
        result = runner.invoke(main, ["ratio", "--form", "1,0,1", "--nmax", "10",
                                      "-o", str(tmp_path / "r.csv")])
        assert result.exit_code == 2


class TestDfuncCommand:
    def test_csv_and_summary(self, runner, tmp_path):
        out = tmp_path / "d.csv"
        result = invoke(runner, "dfunc", "--xmax", "20", "-o", str(out))
        assert result.stdout.strip() == "-1 0"
        lines = out.read_text().splitlines()
        assert lines[0] == "x,D1,D2"
        assert lines[1] == "5,0,-1"
        assert lines[2] == "13,0,0"
        assert lines[3] == "17,-1,0"
        assert lines[4] == "20,-1,0"


class TestAcoeffCommand:
    def test_value(self, runner):
        result = invoke(runner, "acoeff", "--delta", "-1", "--mod", "8", "--res", "5")
        assert result.stdout.strip() == "2"

    def test_zero_class(self, runner):
        result = invoke(runner, "acoeff", "--delta", "-1", "--mod", "8", "--res", "3")
        assert result.stdout.strip() == "0"

    def test_bad_delta(self, runner):
        result = runner.invoke(main, ["acoeff", "--delta", "-4", "--mod", "8", "--res", "1"])
        assert result.exit_code == 2


class TestDensityCommand:
    def test_checkpoints_and_ratio(self, runner, tmp_path):
        out = tmp_path / "den.csv"
        result = invoke(runner, "density", "--delta", "-1", "--x", "100000", "-o", str(out))
        ratio = float(result.stdout.strip())
        assert 0.9 < ratio < 1.1
        lines = out.read_text().splitlines()
        assert lines[0] == "x,empirical,predicted,ratio"
        assert [ln.split(",")[0] for ln in lines[1:]] == ["100", "1000", "10000", "100000"]

    def test_exact_zero_class(self, runner, tmp_path):
        out = tmp_path / "den.csv"
        result = invoke(runner, "density", "--delta", "-1", "--mod", "8", "--res", "3",
                        "--x", "1000", "-o", str(out))
        assert result.stdout.strip() == "exact-zero"


class TestEquidistCommand:
    def test_angle_dump_and_ks(self, runner, tmp_path):
        out = tmp_path / "a.csv"
        result = invoke(runner, "equidist", "--form", "1,0,1", "--limit", "200",
                        "-o", str(out))
        ks = float(result.stdout.strip())
        assert 0.0 <= ks <= 1.0
        lines = out.read_text().splitlines()
        assert lines[0] == "p,x,y,raw_arg,theta"
        assert lines[1].startswith("5,2,1,")
        assert len(lines) == 1 + 21

    def test_stats_sweep(self, runner, tmp_path):
        out, stats = tmp_path / "a.csv", tmp_path / "stats.csv"
        invoke(runner, "equidist", "--form", "1,0,1", "--limit", "5000",
               "-o", str(out), "--stats", str(stats), "--stats-stride", "100")
        lines = stats.read_text().splitlines()
        assert lines[0] == "N,ks,weyl_1,weyl_2,weyl_3,weyl_4,weyl_5"
        assert lines[1].split(",")[0] == "100"

    def test_empty_selection_is_computation_error(self, runner, tmp_path):
        result = runner.invoke(main, ["equidist", "--form", "1,0,1", "--mod", "4",
                                      "--res", "3", "--limit", "100",
                                      "-o", str(tmp_path / "a.csv")])
        assert result.exit_code == 3


class TestReproCommand:
    def test_tiny_scale_produces_all_files(self, runner, tmp_path):
        outdir = tmp_path / "repro"
        result = invoke(runner, "repro", "--outdir", str(outdir), "--scale", "0.002")
        assert result.exit_code == 0
        names = sorted(p.name for p in outdir.iterdir())
        assert names == [
            "fig1_class1mod8.csv",
            "fig1_class5mod8.csv",
            "fig2_class1mod12.csv",
            "fig2_class7mod12.csv",
            "fig3_ratio1mod8.csv",
            "fig3_ratio5mod8.csv",
            "fig4_dfunctions.csv",
        ]
        for name in names:
            assert (outdir / name).read_text().count("\n") >= 2

    def test_bad_scale(self, runner, tmp_path):
        result = runner.invoke(main, ["repro", "--outdir", str(tmp_path), "--scale", "2"])
        assert result.exit_code == 2
