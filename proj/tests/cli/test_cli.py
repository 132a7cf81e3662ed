"""End-to-end tests of the bolmoufang command line: outputs and exit statuses."""

import os
import subprocess

import pytest

CLI = os.environ.get("BOLMOUFANG_CLI", "bolmoufang")

Q1 = """6
0 1 2 3 4 5
1 5 0 4 2 3
2 4 5 0 3 1
3 0 4 5 1 2
4 2 3 1 5 0
5 3 1 2 0 4
"""

M3M4 = "3\n0 1 2\n1 0 1\n2 1 0\n"


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd, timeout=300)


@pytest.fixture
def table(tmp_path):
    def write(text, name="t.tbl"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def record_fields(line):
    kind, *fields = line.rstrip("\n").split("\t")
    return kind, dict(f.split("=", 1) for f in fields)


def test_decode_and_dual():
    r = run("decode", "C25")
    assert r.returncode == 0 and r.stdout == "x((yy)z) = ((xy)y)z\n"
    r = run("dual", "C25")
    assert r.returncode == 0 and r.stdout == "C14\n"
    r = run("decode", "LB")
    assert r.stdout == "x(y(xz)) = (x(yx))z\n"


def test_dual_rejects_equal_bracketings_with_position():
    r = run("dual", "D33")
    assert r.returncode == 3
    assert "position 2" in r.stderr


def test_check_q1(table):
    r = run("check", table(Q1), "--identity", "LA")
    assert r.returncode == 0
    assert r.stdout.splitlines()[0] == "LA: holds; loop: yes; two-sided inverses: no"


def test_check_failure_prints_assignment(table):
    r = run("check", table(Q1), "-i", "RA")
    assert r.returncode == 1
    assert r.stdout.startswith("RA: fails at x=")


def test_check_m3m4_and_trivial(table):
    r = run("check", table(M3M4), "-i", "M3", "-i", "M4")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0].startswith("M3: holds; loop: no")
    assert lines[1].startswith("M4: holds; loop: no")
    r = run("check", table("1\n0\n"), "-i", "C15")
    assert r.returncode == 0 and "C15: holds" in r.stdout


def test_check_structure(table):
    t = table("3\n0 2 1\n1 0 2\n2 1 0\n")
    assert run("check", t, "--neutral", "right", "--inverses", "two-sided").returncode == 0
    assert run("check", t, "--neutral", "two-sided").returncode == 1


def test_check_parse_error_is_distinct(table):
    r = run("check", table("2\n0 1\n1 5\n"), "-i", "LA")
    assert r.returncode == 3
    assert "line 3" in r.stderr
    assert run("check", "/nonexistent.tbl").returncode == 3
    assert run("check", table(Q1), "-i", "NOPE").returncode == 3


def test_search_statuses():
    r = run("search", "--order", "3", "--neutral", "right", "--inverses", "two-sided",
            "--identity", "LB", "--target", "non-loop")
    assert r.returncode == 0
    assert r.stdout.splitlines()[1:] == ["3", "0 2 1", "1 0 2", "2 1 0"]
    r = run("search", "--order", "1..5", "--neutral", "two-sided", "--inverses", "two-sided",
            "--identity", "C", "--target", "non-loop")
    assert r.returncode == 1
    r = run("search", "--order", "2", "--identity", "ASSOC", "--neutral", "two-sided",
            "--inverses", "two-sided", "--target", "non-group")
    assert r.returncode == 1
    r = run("search", "--order", "10", "-i", "B25", "--target", "non-group", "--budget", "0.05")
    assert r.returncode == 2


def test_search_config_errors():
    assert run("search", "--order", "3", "--target", "non-loop").returncode == 3
    assert run("search", "--order", "0", "-i", "LB").returncode == 3
    assert run("search", "--order", "x..y", "-i", "LB").returncode == 3
    assert run("search", "--order", "3", "-i", "LB", "--neutral", "up").returncode == 3
    assert run("search").returncode == 3


def test_search_output_rechecks(tmp_path):
    args = ["search", "--order", "1..6", "-i", "D12", "--workers", "2"]
    human = run(*args)
    assert human.returncode == 0
    from_stdout = tmp_path / "stdout.tbl"
    from_stdout.write_text(human.stdout)
    out_file = tmp_path / "out.tbl"
    assert run(*args, "--out", str(out_file)).returncode == 0

    machine = run(*args, "--machine")
    assert machine.returncode == 0
    lines = machine.stdout.splitlines()
    assert lines[0] == "# bolmoufang-records 1"
    kind, fields = record_fields(lines[1])
    assert kind == "outcome" and fields["status"] == "witness"
    rows = fields["witness"].split(";")
    from_record = tmp_path / "record.tbl"
    from_record.write_text("\n".join(rows) + "\n")

    reports = []
    for path in (from_stdout, out_file, from_record):
        r = run("check", str(path), "-i", "D12", "--machine")
        assert r.returncode == 0
        reports.append([l for l in r.stdout.splitlines() if l.startswith("property\t")])
    assert reports[0] == reports[1] == reports[2]
    assert any(l == "property\tis_loop=no" for l in reports[0])


def test_search_deterministic_across_workers():
    tables = [run("search", "--order", "1..6", "-i", "C35", "--workers", w).stdout.splitlines()[1:]
              for w in ("1", "3")]
    assert tables[0] == tables[1] and tables[0]


def test_enumerate_and_verify():
    r = run("enumerate", "--order", "4", "--neutral", "two-sided", "--inverses", "none",
            "-i", "ASSOC", "--iso", "--latin-only", "--count")
    assert r.returncode == 0 and r.stdout == "2\n"
    r = run("enumerate", "--order", "1", "--count")
    assert r.stdout == "1\n"
    r = run("verify", "-i", "C15", "--max-order", "5")
    assert r.returncode == 0
    assert len(r.stdout.splitlines()) == 5
    r = run("verify", "-i", "D23", "--max-order", "5")
    assert r.returncode == 1


def test_lab_fixtures_record_file(tmp_path):
    out = tmp_path / "fixtures.rec"
    r = run("lab", "fixtures", "--out", str(out))
    assert r.returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# bolmoufang-records 1"
    claims = [record_fields(l) for l in lines[1:]]
    assert len(claims) == 5
    for kind, fields in claims:
        assert kind == "claim"
        assert fields["pass"] == "yes"
        assert fields["observed"] == fields["expectation"]


def test_lab_suites_and_statuses(tmp_path):
    assert run("lab", "onesided", "--max-order", "4", "--out", str(tmp_path / "o.rec")).returncode == 0
    r = run("lab", "classification", "--max-order", "5", "--out", str(tmp_path / "c.rec"))
    assert r.returncode == 0
    rows = [record_fields(l) for l in (tmp_path / "c.rec").read_text().splitlines()[1:]]
    assert len(rows) == 60 and all(k == "row" for k, _ in rows)
    assert all(f["consistent"] == "yes" for _, f in rows)
    # a mandatory search that runs out of budget has its own status
    r = run("lab", "b25", "--max-order", "10", "--budget", "0.05", "--out", str(tmp_path / "b.rec"))
    assert r.returncode == 2
    assert run("lab", "nonsense").returncode == 3


def test_b25_checkpoint_resume(tmp_path):
    ck = tmp_path / "b25.ck"
    r = run("b25", "--max-order", "5", "--checkpoint", str(ck))
    assert r.returncode == 0
    assert ck.read_text().startswith("bolmoufang-checkpoint 1\n")
    r = run("b25", "--max-order", "6", "--resume", str(ck))
    assert r.returncode == 0
    assert "orders searched this run: 6\n" in r.stdout
    bad = tmp_path / "bad.ck"
    bad.write_text(ck.read_text()[:-5])
    assert run("b25", "--max-order", "6", "--resume", str(bad)).returncode == 3
    assert run("b25", "--max-order", "6", "--resume", str(ck), "--split-depth", "2").returncode == 3
