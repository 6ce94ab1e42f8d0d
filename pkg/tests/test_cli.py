import io
import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from multilatin import are_paratopic, cyclic_simple, format_square, parse_mls, validate
from multilatin.cli import RunConfig, run
from multilatin.io import parse_oa, parse_sls

from conftest import DATA, load

SCHEMA = json.loads(resources.files("multilatin").joinpath("schema/result.schema.json").read_text())


def mls(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def mls_json(*argv):
    code, out, err = mls(*argv, "--json")
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    assert payload["exit_code"] == code
    return code, payload


def shell(*argv, stdin=None, env=None):
    return subprocess.run(
        [sys.executable, "-m", "multilatin.cli", *map(str, argv)],
        input=stdin,
        capture_output=True,
        text=True,
        env={**os.environ, **(env or {})},
    )


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write


# -- exit codes ----------------------------------------------------------------
def test_uk_pipeline_is_non_separable():
    gen = shell("gen", "--family", "Uk", "--k", "4")
    assert gen.returncode == 0
    assert validate(parse_mls(gen.stdout), require_complete=True).valid
    sep = shell("separate", "-", stdin=gen.stdout)
    assert sep.returncode == 1
    assert sep.stdout.strip() == "non-separable"


def test_census_row():
    code, out, _ = mls("enumerate", "-n", 3, "-k", 2, "--census")
    assert code == 0
    assert out == "3\t2\t4\t3\t3\t1\n"


def test_paratopic_same_file():
    path = DATA / "U4.mls"
    assert mls("paratopic", path, path)[0] == 0


def test_paratopic_negative():
    assert mls("paratopic", DATA / "semi_L.mls", DATA / "semi_Lprime.mls")[0] == 1


def test_usage_errors_exit_2():
    assert mls("nosuch")[0] == 2
    assert mls("gen", "--family", "Uk")[0] == 2
    code, _, err = mls("validate", DATA / "missing.mls")
    assert code == 2 and err.startswith("mls validate:")


def test_embed_order_too_small():
    code, out, err = mls("embed", "--order", 5, DATA / "L3.mls")
    assert code == 2 and out == ""
    assert "unsupported order" in err


def test_resource_limit_exit_3():
    code, _, err = mls("enumerate", "-n", 4, "-k", 4)
    assert code == 3 and "long run" in err
    assert mls("enumerate", "-n", 3, "-k", 5, "--node-limit", 10)[0] == 3


def test_separate_k1_is_usage_error(write):
    path = write("l.mls", format_square(cyclic_simple(3, 1)))
    assert mls("separate", path)[0] == 2


# -- subcommands ---------------------------------------------------------------
def test_validate(write):
    assert mls("validate", DATA / "L4.mls") == (0, "valid\n", "")
    assert mls("validate", "--complete", DATA / "simple_rectangle_2x3.mls")[0] == 1
    code, payload = mls_json("validate", DATA / "nonsep_order4_k5_typo.mls")
    assert code == 1 and payload["verdict"] is False
    kinds = sorted(v["kind"] for v in payload["violations"])
    assert kinds == ["ColExcess", "RowExcess"]


def test_syntax_error_reports_position(write):
    path = write("bad.mls", "mls 1\n2 1\n1|x\n2|1\n")
    code, _, err = mls("validate", path)
    assert code == 2 and "line 3" in err


@pytest.mark.parametrize(
    "args, n, k",
    [
        (["--family", "Ln", "--n", 4], 4, 2),
        (["--family", "Uk", "--k", 3], 5, 3),
        (["--family", "Uks", "--k", 3, "--s", 1], 6, 3),
        (["--family", "cyclic", "--n", 5, "--k", 2], 5, 2),
        (["--family", "inflate", "--n", 3, "--k", 4], 3, 4),
        (["--family", "random", "--n", 4, "--k", 3], 4, 3),
    ],
)
def test_gen_families(args, n, k):
    code, out, _ = mls("gen", *args)
    sq = parse_mls(out, require_complete=True)
    assert code == 0 and (sq.order, sq.index) == (n, k)


def test_gen_golden():
    assert mls("gen", "--family", "Ln", "--n", 4)[1] == format_square(load("L4.mls"))


def test_gen_random_is_seeded():
    a = mls("gen", "--family", "random", "--n", 5, "--k", 2, "--seed", 7)[1]
    b = mls("gen", "--family", "random", "--n", 5, "--k", 2, "--seed", 7)[1]
    c = mls("gen", "--family", "random", "--n", 5, "--k", 2, "--seed", 8)[1]
    assert a == b and a != c


def test_gen_uks_bad_s():
    assert mls("gen", "--family", "Uks", "--k", 3, "--s", 3)[0] == 2


def test_complete_and_embed():
    code, out, _ = mls("complete", DATA / "simple_rectangle_2x3.mls")
    assert code == 0 and validate(parse_mls(out), require_complete=True).valid
    code, out, _ = mls("embed", "--order", 6, DATA / "L3.mls")
    big = parse_mls(out, require_complete=True)
    assert code == 0 and big.order == 6


def test_separate_erode_fullsep():
    code, out, _ = mls("separate", DATA / "L3_doubled.mls")
    assert code == 0 and out.startswith("separable")
    assert mls("erode", DATA / "L3_doubled.mls")[0] == 1
    assert mls("fullsep", DATA / "L3_doubled.mls")[0] == 1
    code, payload = mls_json("separate", DATA / "L3_doubled.mls")
    assert payload["verdict"] is True
    assert parse_mls(payload["witness"]).index == 2


def test_fullsep_layers(write):
    path = write("c.mls", format_square(cyclic_simple(4, 3)))
    code, payload = mls_json("fullsep", path)
    assert code == 0 and len(payload["layers"]) == 3


def test_convert_roundtrips(write):
    src = DATA / "L4.mls"
    code, oa_text, _ = mls("convert", "--to", "oa", src)
    assert code == 0 and parse_oa(oa_text).size == 32
    back = mls("convert", "--from", "oa", write("x.oa", oa_text))[1]
    assert parse_mls(back) == load("L4.mls")
    sls_text = mls("convert", "--to", "semi", src)[1]
    assert parse_sls(sls_text).is_valid()
    back = mls("convert", "--from", "semi", write("x.sls", sls_text))[1]
    assert parse_mls(back) == load("L4.mls")


def test_convert_with_map():
    code, out, _ = mls("convert", "--from", "semi", "--map", DATA / "f2.map", DATA / "semi_3x3_2.sls")
    assert code == 0 and parse_mls(out) == load("semi_Lprime.mls")


def test_canon(write):
    a = mls("canon", DATA / "U4.mls")[1]
    t = write("t.mls", format_square(load("U4.mls").transpose()))
    assert mls("canon", t)[1] == a
    assert are_paratopic(parse_mls(a), load("U4.mls"))


def test_enumerate_representatives():
    code, payload = mls_json("enumerate", "-n", 3, "-k", 2)
    reps = [parse_mls(t) for t in payload["representatives"]]
    assert code == 0 and len(reps) == 4


# -- JSON, jobs and config -----------------------------------------------------
@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--family", "Uk", "--k", 3],
        ["separate", DATA / "U4.mls"],
        ["erode", DATA / "L3_doubled.mls"],
        ["complete", DATA / "simple_rectangle_2x3.mls"],
        ["embed", "--order", 2, DATA / "L3.mls"],
        ["convert", "--to", "oa", DATA / "U4.mls"],
        ["canon", DATA / "L3.mls"],
        ["paratopic", DATA / "U4.mls", DATA / "U4.mls"],
        ["enumerate", "-n", 3, "-k", 3, "--census"],
        ["enumerate", "-n", 5, "-k", 5],
        ["validate", DATA / "U42.mls"],
    ],
)
def test_json_matches_schema(argv):
    code, payload = mls_json(*argv)
    assert payload["command"] == argv[0]


def test_census_json():
    _, payload = mls_json("enumerate", "-n", 4, "-k", 1, "--census")
    assert payload["census"] == {"n": 4, "k": 1, "classes": 2, "erodable": 0, "separable": 0, "simple": 2}


def test_jobs_env_and_flag():
    one = shell("enumerate", "-n", 3, "-k", 4, "--census", env={"MLS_JOBS": "1"})
    two = shell("enumerate", "-n", 3, "-k", 4, "--census", env={"MLS_JOBS": "2"})
    assert one.returncode == two.returncode == 0
    assert one.stdout == two.stdout == "3\t4\t24\t22\t24\t0\n"
    assert mls("enumerate", "-n", 3, "-k", 2, "--jobs", 0)[0] == 2


def test_run_config_checks():
    assert RunConfig().jobs == 1
    with pytest.raises(ValueError):
        RunConfig(node_limit=0)


def test_console_script_entry_point():
    proc = subprocess.run(["mls", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "enumerate" in proc.stdout
