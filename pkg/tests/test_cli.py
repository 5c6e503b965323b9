"""End-to-end tests of the command-line interface and its exit codes."""

import numpy as np
import pytest

from llasso.cli import main


@pytest.fixture
def regression_csv(tmp_path):
    rng = np.random.default_rng(0)
    n, p = 40, 8
    idx = np.arange(p)
    sigma = 0.6 ** np.abs(idx[:, None] - idx[None, :])
    X = rng.standard_normal((n, p)) @ np.linalg.cholesky(sigma).T
    beta = np.array([2.0, -1.0, 0, 0, 1.5, 0, 0, 0])
    y = X @ beta + rng.standard_normal(n)
    path = tmp_path / "reg.csv"
    header = ",".join([f"x{j}" for j in range(p)] + ["y"])
    rows = [",".join(f"{v:.10g}" for v in np.append(X[i], y[i]))
            for i in range(n)]
    path.write_text(header + "\n" + "\n".join(rows) + "\n")
    return str(path)


def run(argv):
    return main(argv)


class TestFit:
    def test_llasso_coefficient_table(self, regression_csv, capsys):
        code = run(["fit", "--data", regression_csv, "--response", "y",
                    "--estimator", "llasso", "--lambda", "0.1", "--d", "0.5"])
        out = capsys.readouterr().out
        assert code == 0
        # one row per predictor plus the intercept row
        assert out.count("x") >= 8
        assert "(intercept)" in out
        assert "converged: True" in out

    def test_out_of_range_d_exits_2(self, regression_csv, capsys):
        code = run(["fit", "--data", regression_csv, "--response", "y",
                    "--estimator", "llasso", "--lambda", "0.1", "--d", "1.5"])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_total_shrinkage_zero_coefficients(self, regression_csv, capsys,
                                               tmp_path):
        out_file = tmp_path / "fit.csv"
        code = run(["fit", "--data", regression_csv, "--response", "y",
                    "--estimator", "lasso", "--lambda", "1e9",
                    "--format", "csv", "--out", str(out_file)])
        assert code == 0
        lines = out_file.read_text().strip().split("\n")
        assert lines[0] == "variable,coef_standardized,coef_original"
        intercept = float(lines[1].split(",")[2])
        coefs = [float(l.split(",")[1]) for l in lines[2:]]
        assert all(c == 0.0 for c in coefs)
        # with all-zero coefficients the intercept is the response mean
        data = np.genfromtxt(regression_csv, delimiter=",", names=True)
        assert abs(intercept - np.mean(data["y"])) < 1e-9

    def test_nonconvergence_exit_3(self, regression_csv, capsys):
        code = run(["fit", "--data", regression_csv, "--response", "y",
                    "--estimator", "lasso", "--lambda", "1e-6",
                    "--max-sweeps", "1"])
        assert code == 3
        code = run(["fit", "--data", regression_csv, "--response", "y",
                    "--estimator", "lasso", "--lambda", "1e-6",
                    "--max-sweeps", "1", "--allow-nonconverged"])
        assert code == 0

    def test_missing_column_exit_2(self, regression_csv, capsys):
        assert run(["fit", "--data", regression_csv, "--response", "nope",
                    "--estimator", "ols"]) == 2

    def test_numerical_failure_exit_3(self, tmp_path, capsys):
        # exactly collinear predictors: ingestion passes, OLS must refuse
        rng = np.random.default_rng(1)
        a = rng.standard_normal(12)
        b = rng.standard_normal(12)
        y = a + b + rng.standard_normal(12)
        rows = [f"{a[i]:.10g},{b[i]:.10g},{a[i] + b[i]:.10g},{y[i]:.10g}"
                for i in range(12)]
        path = tmp_path / "collinear.csv"
        path.write_text("a,b,c,y\n" + "\n".join(rows) + "\n")
        code = run(["fit", "--data", str(path), "--response", "y",
                    "--estimator", "ols"])
        assert code == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_gen_llasso_vector(self, regression_csv, capsys):
        code = run(["fit", "--data", regression_csv, "--response", "y",
                    "--estimator", "gen-llasso", "--lambda", "0.1",
                    "--d-vector", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8"])
        assert code == 0


class TestCv:
    def test_determinism(self, regression_csv, tmp_path):
        args = ["cv", "--data", regression_csv, "--response", "y",
                "--estimators", "ols,ridge", "--folds", "5", "--reps", "2",
                "--seed", "9", "--format", "csv"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().strip().split("\n")
        assert lines[0] == "estimator,median_mse_y,se_mse_y,reps,folds,seed"
        assert len(lines) == 3

    def test_folds_exceeding_rows_exit_2(self, regression_csv, capsys):
        assert run(["cv", "--data", regression_csv, "--response", "y",
                    "--estimators", "ols", "--folds", "200",
                    "--reps", "1"]) == 2


class TestSimulate:
    def test_byte_identical_across_runs_and_workers(self, tmp_path):
        base = ["simulate", "--examples", "1", "--reps", "2", "--seed", "7",
                "--format", "csv"]
        files = []
        for name, extra in (("a", ["--workers", "1"]),
                            ("b", ["--workers", "1"]),
                            ("c", ["--workers", "2"])):
            f = tmp_path / f"{name}.csv"
            assert run(base + extra + ["--out", str(f)]) == 0
            files.append(f.read_bytes())
        assert files[0] == files[1] == files[2]

    def test_unknown_example_exit_2(self, capsys):
        assert run(["simulate", "--examples", "9", "--reps", "1"]) == 2

    def test_raw_output_written(self, tmp_path):
        raw = tmp_path / "raw.csv"
        out = tmp_path / "out.csv"
        assert run(["simulate", "--examples", "1", "--estimators",
                    "ols,lasso", "--reps", "2", "--seed", "3",
                    "--format", "csv", "--out", str(out),
                    "--raw-out", str(raw)]) == 0
        lines = raw.read_text().strip().split("\n")
        assert lines[0] == "design,estimator,rep,mse_y,mse_beta"
        assert len(lines) == 5


class TestRisk:
    def test_grid_rows_and_internal_consistency(self, tmp_path):
        out = tmp_path / "risk.csv"
        code = run(["risk", "--means", "0,1,2", "--thresholds", "0.5,1,2",
                    "--d", "0.4,1", "--tail-prob", "0.1",
                    "--draws", "20000", "--seed", "5", "--format", "csv",
                    "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == ("mean,threshold,d,tail_prob,risk_closed_form,"
                            "mc_estimate,mc_se,bound")
        assert len(lines) == 1 + 3 * 3 * 2
        rows = [dict(zip(lines[0].split(","), map(float, l.split(","))))
                for l in lines[1:]]
        # Monte Carlo brackets the closed form in every row
        for r in rows:
            assert abs(r["mc_estimate"] - r["risk_closed_form"]) \
                <= 4 * r["mc_se"] + 1e-12
        # the d column factorizes: risk(d) * 4 / (1+d)^2 == risk(1)
        by_key = {(r["mean"], r["threshold"], r["d"]): r for r in rows}
        for (mean, thr, d), r in by_key.items():
            if d != 1.0:
                ref = by_key[(mean, thr, 1.0)]
                assert abs(r["risk_closed_form"] * 4 / (1 + d) ** 2
                           - ref["risk_closed_form"]) < 1e-10

    def test_bad_tail_prob_exit_2(self, capsys):
        assert run(["risk", "--tail-prob", "0.7"]) == 2


class TestChooseD:
    def test_closed_form(self, regression_csv, tmp_path):
        out = tmp_path / "d.csv"
        code = run(["choose-d", "--data", regression_csv, "--response", "y",
                    "--lambda1", "0.1", "--lambda2", "1.0",
                    "--format", "csv", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "method,d,used_l1_fallback"
        method, d, fallback = lines[1].split(",")
        assert method == "closed-form"
        assert 0.0 <= float(d) <= 1.0

    def test_l1_method(self, regression_csv, capsys):
        code = run(["choose-d", "--data", regression_csv, "--response", "y",
                    "--method", "l1", "--lambda", "0.1"])
        assert code == 0
        assert "l1" in capsys.readouterr().out

    def test_missing_params_exit_2(self, regression_csv, capsys):
        assert run(["choose-d", "--data", regression_csv,
                    "--response", "y"]) == 2
        assert run(["choose-d", "--data", regression_csv, "--response", "y",
                    "--method", "l1"]) == 2
