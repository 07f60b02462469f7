"""End-to-end checks of the apn command-line tool.

Runs every subcommand on small fixtures, validates JSON output against the
schemas in schemas/, and checks exit codes and round trips. Field arithmetic
for the fixtures is done here independently of the C++ library.
"""

import argparse
import json
import pathlib
import subprocess
import sys

import jsonschema

FAILURES = []


def check(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        FAILURES.append(what)


class Field:
    def __init__(self, n, modulus):
        self.n, self.modulus, self.size = n, modulus, 1 << n

    def mul(self, a, b):
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.n & 1:
                a ^= self.modulus
        return r

    def pow(self, x, d):
        r = 1
        for _ in range(d):
            r = self.mul(r, x)
        return r

    def frob_sum(self, x, step):
        s, y = 0, x
        for _ in range(0, self.n, step):
            s ^= y
            for _ in range(step):
                y = self.mul(y, y)
        return s


def vbf(n, m, table):
    return f"{n} {m}\n" + " ".join(format(v, "x") for v in table) + "\n"


def read_vbf(path):
    lines = path.read_text().split("\n")
    return [int(t, 16) for t in lines[1].split()]


class Runner:
    def __init__(self, cli, work, schemas):
        self.cli, self.work = cli, work
        self.schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in schemas.glob("*.schema.json")}

    def run(self, *args):
        p = subprocess.run([self.cli, *args], cwd=self.work, capture_output=True, text=True)
        return p.returncode, p.stdout, p.stderr

    def json(self, schema, *args, expect_code=0):
        code, out, err = self.run(*args)
        check(code == expect_code, f"{' '.join(args)}: exit {code} (expected {expect_code}) {err.strip()}")
        try:
            doc = json.loads(out)
        except json.JSONDecodeError:
            check(False, f"{' '.join(args)}: output is JSON")
            return {}
        self.validate(schema, doc, " ".join(args))
        return doc

    def validate(self, schema, doc, label):
        try:
            jsonschema.validate(doc, self.schemas[schema])
            check(True, f"{label}: matches {schema} schema")
        except jsonschema.ValidationError as e:
            check(False, f"{label}: matches {schema} schema ({e.message})")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--schemas", required=True, type=pathlib.Path)
    ap.add_argument("--work", required=True, type=pathlib.Path)
    a = ap.parse_args()
    work = a.work
    work.mkdir(parents=True, exist_ok=True)
    r = Runner(a.cli, work, a.schemas)

    f5, f6, f8 = Field(5, 0x25), Field(6, 0x5B), Field(8, 0x11D)
    cube = {n: [fs.pow(x, 3) for x in range(fs.size)] for n, fs in ((5, f5), (6, f6), (8, f8))}
    (work / "cube5.vbf").write_text(vbf(5, 5, cube[5]))
    (work / "cube6.vbf").write_text(vbf(6, 6, cube[6]))
    (work / "cube8.vbf").write_text(vbf(8, 8, cube[8]))
    (work / "inv6.vbf").write_text(vbf(6, 6, [f6.pow(x, 62) if x else 0 for x in range(64)]))
    (work / "empty.vbf").write_text("")
    (work / "bad_value.vbf").write_text("2 2\n0 1 2 7\n")
    (work / "L2.lin1").write_text("6\n0 g^42\n1 g^3\n2 g^34\n3 g^59\n4 g^59\n5 g^12\n")
    # x -> x^2 + x on GF(32): with e0 = 1 it cancels B(x, e0) and forces a kernel.
    (work / "collapse.lin1").write_text("5\n0 1\n1 1\n")
    (work / "sw_f.vbf").write_text(vbf(5, 4, [v & 15 for v in cube[5]]))
    (work / "sw_g.vbf").write_text(vbf(5, 1, [v >> 4 for v in cube[5]]))
    (work / "cat_f.vbf").write_text(vbf(4, 5, cube[5][:16]))
    (work / "cat_g.vbf").write_text(vbf(4, 5, cube[5][16:]))

    # analyze
    code, out, _ = r.run("analyze", "cube6.vbf")
    check(code == 0 and "APN: true, quadratic: true, spectrum: classical" in out, "analyze x^3 n=6: APN, quadratic, classical")
    code, out, _ = r.run("analyze", "inv6.vbf")
    check(code == 0 and "δ = 4" in out, "analyze inverse n=6: δ = 4")
    code, _, err = r.run("analyze", "empty.vbf")
    check(code == 2 and "expected header" in err, "analyze empty file: exit 2, expected header")
    code, _, err = r.run("analyze", "bad_value.vbf")
    check(code == 2 and "line 2" in err, "analyze out-of-range value: exit 2 with line number")
    code, _, _ = r.run("analyze", "missing.vbf")
    check(code == 2, "analyze missing file: exit 2")
    doc = r.json("analyze", "analyze", "cube6.vbf", "--json", "--gamma-rank")
    check(doc.get("gamma_rank") == 1102 and doc.get("walsh", {}).get("16") == 210, "analyze --json: gamma rank 1102, W=16 x210")

    # verify
    code, out, _ = r.run("verify", "table1")
    check(code == 0 and "13/13" in out and "row 7 values {-32,-16,-8,0,8,16,32}" in out, "verify table1")
    code, out, _ = r.run("verify", "theorem35", "--n", "4")
    check(code == 0 and "65536/65536" in out, "verify theorem35 --n 4: 65536/65536")
    code, _, _ = r.run("verify", "theorem35", "--n", "5")
    check(code == 2, "verify theorem35 --n 5 without --long: exit 2")
    r.json("verify", "verify", "nyberg", "--json")
    doc = r.json("verify", "verify", "example-n8", "--json")
    check(doc.get("passed") is True and len(doc.get("skipped", [])) == 1, "verify example-n8 without --long skips the rank step")
    code, _, _ = r.run("verify", "everything")
    check(code == 2, "verify unknown target: exit 2")

    # construct, with analyze round trips
    def analyze_apn(path):
        return json.loads(r.run("analyze", path, "--json")[1])["apn"]

    doc = r.json("certificate", "construct", "hmod", "--n", "6", "--lin", "L2.lin1", "-o", "g2.vbf", "--invariants")
    check(doc.get("holds") is True and analyze_apn("g2.vbf") is True, "construct hmod L_2: holds, output APN")
    check(doc.get("invariants", {}).get("gamma_rank") == 1170, "construct hmod L_2: gamma rank 1170")
    doc = r.json("certificate", "construct", "hmod", "--n", "5", "--lin", "collapse.lin1", "--e0", "0x1", "-o", "bad.vbf")
    check(doc.get("holds") is False and "a" in doc.get("witness", {}), "construct hmod collapsing L: holds=false with witness a")
    check(analyze_apn("bad.vbf") is False, "construct hmod collapsing L: output emitted and not APN")
    code, _, _ = r.run("construct", "coset", "--n", "8", "--constants", "0,0,g^170,1", "-o", "c8.vbf", "--cert", "c8.json")
    doc = json.loads((work / "c8.json").read_text())
    r.validate("certificate", doc, "construct coset n=8")
    a85 = f8.pow(2, 85)
    expect = [f8.pow(x, 3) ^ f8.mul(a85, f8.mul(f8.frob_sum(x, 1), f8.frob_sum(x, 2))) for x in range(256)]
    check(code == 0 and doc["holds"] and read_vbf(work / "c8.vbf") == expect, "construct coset n=8: x^3 + g^85 Tr Tr2, holds")
    check(analyze_apn("c8.vbf") is True, "construct coset n=8: output APN")
    doc = r.json("certificate", "construct", "coset", "--n", "8", "--constants", "0,0,0,g^3", "-o", "c8b.vbf")
    check(doc.get("holds") is False and set(doc.get("witness", {})) == {"x1", "x2", "x3", "x4"}, "construct coset inadmissible sum: witness flat")
    check(analyze_apn("c8b.vbf") is False, "construct coset inadmissible sum: not APN")
    for u in ("1", "5", "f"):
        doc = r.json("certificate", "construct", "switch", "--f", "sw_f.vbf", "--g", "sw_g.vbf", "--u", u, "-o", f"sw{u}.vbf")
        check(doc.get("holds") == analyze_apn(f"sw{u}.vbf"), f"construct switch u={u}: certificate agrees with analyze")
    doc = r.json("certificate", "construct", "concat", "--f", "cat_f.vbf", "--g", "cat_g.vbf", "-o", "cat.vbf")
    check(doc.get("holds") == analyze_apn("cat.vbf"), "construct concat: certificate agrees with analyze")
    code, _, _ = r.run("construct", "hmod", "--n", "6", "-o", "x.vbf")
    check(code == 2, "construct hmod without --lin: exit 2")
    r.run("construct", "hmod", "--n", "6", "--lin", "L2.lin1", "-o", "g2b.vbf")
    check((work / "g2.vbf").read_text() == (work / "g2b.vbf").read_text(), "construct is deterministic")

    # search
    one = r.json("search", "search", "--n", "5", "--workers", "1", "--cap", "40")
    three = r.json("search", "search", "--n", "5", "--workers", "3", "--cap", "40")
    check(one.get("hits") == 4608 and one.get("hit_list") == three.get("hit_list"), "search n=5: 4608 hits, same list for 1 and 3 workers")
    doc = r.json("search", "search", "--n", "4", "--workers", "4")
    check(doc.get("hits") == 448 and doc["verification"]["disagreements"] == 0, "search n=4: 448 hits, no disagreements")
    ra = r.json("search", "search", "--n", "6", "--mode", "random", "--samples", "30000", "--seed", "5")
    rb = r.json("search", "search", "--n", "6", "--mode", "random", "--samples", "30000", "--seed", "5", "--workers", "2")
    check(ra.get("hits") == rb.get("hits") and ra.get("hit_list") == rb.get("hit_list"), "search random: reproducible across workers")
    code, out, _ = r.run("search", "--n", "4", "--out", "csv", "--cap", "5")
    rows = out.strip().split("\n")
    check(code == 0 and rows[0] == "code,c0,c1,c2,c3" and len(rows) == 6, "search --out csv: header and 5 rows")
    doc = r.json("search", "search", "--n", "4", "--cap", "3", "--powers")
    check(any(c.startswith("g^") for h in doc.get("hit_list", []) for c in h["coefficients"]), "search --powers: g^k coefficients")
    code, _, _ = r.run("search", "--n", "6")
    check(code == 2, "search n=6 exhaustive without --long: exit 2")
    doc = r.json("coset-search", "search", "--n", "8", "--space", "coset")
    check(len(doc.get("admissible", [])) == 4 and doc.get("failures") == 0, "search coset n=8: 4 admissible sums, no failures")
    code, _, _ = r.run("search", "--n", "5", "--workers", "0")
    check(code == 2, "search --workers 0: exit 2")

    # rank and compare
    doc = r.json("rank", "rank", "cube6.vbf")
    check(doc.get("gamma_rank") == 1102, "rank x^3 n=6: 1102")
    code, _, _ = r.run("rank", "cube8.vbf")
    check(code == 2, "rank n=8 without --long: exit 2")
    doc = r.json("compare", "compare", "cube6.vbf", "g2.vbf")
    check(doc.get("inequivalent") is True and doc.get("invariant") == "gamma-rank", "compare x^3 vs G_2: gamma rank differs")
    doc = r.json("compare", "compare", "cube6.vbf", "cube6.vbf")
    check(doc.get("inequivalent") is False, "compare x^3 with itself: undetermined")

    # usage
    code, _, _ = r.run("analyze", "cube6.vbf", "--no-such-flag")
    check(code == 2, "unknown flag: exit 2")
    code, out, _ = r.run("--help")
    check(code == 0 and "construct" in out, "--help: exit 0")

    print(f"{len(FAILURES)} failure(s)")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
