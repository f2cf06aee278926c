import json

import antembed as ae
from antembed.cli import main
from antembed.digraph import Digraph, to_arclist


def _write(tmp_path, name, digraph, root=None):
    p = tmp_path / name
    p.write_text(to_arclist(digraph, root=root))
    return str(p)


def test_gen_and_check_free(tmp_path, capsys):
    assert main(["gen", "burr", "--k", "3"]) == 0
    out = capsys.readouterr().out
    d, _ = ae.parse_arclist(out)
    assert d.a() == 2 * d.n

    host = _write(tmp_path, "burr.txt", d)
    assert main(["check-free", "--host", host, "--s", "1"]) == 1
    payload = json.loads(capsys.readouterr().out)
    w = payload["witness"]
    cn = ae.common_neighborhood(d, w["a"], w["sign_a"], w["b"], w["sign_b"])
    assert set(w["common"]) <= cn

    fano = ae.gen_incidence(2)
    host = _write(tmp_path, "fano.txt", fano)
    assert main(["check-free", "--host", host, "--s", "2"]) == 0


def test_embed_exit_codes(tmp_path, capsys):
    tree = Digraph(2, [(0, 1)])
    host = Digraph(3, [(0, 1), (2, 1)])
    tp, hp = _write(tmp_path, "t.txt", tree), _write(tmp_path, "h.txt", host)
    trace = tmp_path / "trace.json"
    assert main(["--json", "embed", "--tree", tp, "--host", hp, "--trace", str(trace)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"] and payload["failure"] is None
    assert trace.exists()

    burr = ae.gen_burr(3)
    star = Digraph(4, [(0, 1), (0, 2), (0, 3)])
    tp, hp = _write(tmp_path, "star.txt", star), _write(tmp_path, "burr.txt", burr)
    assert main(["embed", "--tree", tp, "--host", hp]) == 2
    capsys.readouterr()
    assert main(["embed", "--tree", tp, "--host", hp, "--force-oracle"]) == 2
    capsys.readouterr()


def test_embed_cat_and_good_arcs(tmp_path, capsys):
    host = Digraph(4, [(u, v) for u in range(4) for v in range(4) if u != v])
    star = Digraph(3, [(0, 1), (0, 2)])
    tp, hp = _write(tmp_path, "t.txt", star), _write(tmp_path, "h.txt", host)
    assert main(["--json", "embed-cat", "--tree", tp, "--host", hp]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"]
    assert main(["--json", "embed-cat", "--tree", tp, "--host", hp, "--mode", "mindeg"]) == 0
    capsys.readouterr()
    assert main(["--json", "good-arcs", "--tree", tp, "--host", hp, "--order", "random:7"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] >= payload["lemma8_bound"]

    small = Digraph(3, [(0, 1), (2, 1)])
    hp2 = _write(tmp_path, "small.txt", small)
    assert main(["embed-cat", "--tree", _write(tmp_path, "s2.txt", star), "--host", hp2]) == 2
    capsys.readouterr()


def test_select_and_oracle(tmp_path, capsys):
    host = ae.gen_random_dense(10, 4, seed=1)
    hp = _write(tmp_path, "h.txt", host)
    assert main(["--json", "select", "--host", hp, "--k", "4", "--r", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["case"] in ("I", "II")

    tree = Digraph(3, [(0, 1), (2, 1)])
    tp = _write(tmp_path, "t.txt", tree)
    assert main(["--json", "oracle", "--tree", tp, "--host", hp]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] in ("Embeds", "NotContained")


def test_sweep_cli(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = main(
        ["sweep", "--suite", "burr-tightness", "--param", "kmax=3", "--out", str(out)]
    )
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["schema"] == 1 and report["ok"]
    capsys.readouterr()


def test_cli_error_path(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("nonsense\n")
    assert main(["check-free", "--host", str(bad), "--s", "1"]) == 2
    capsys.readouterr()
