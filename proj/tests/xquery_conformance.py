#!/usr/bin/env python3
"""Runs the exported XQuery workload through Saxon-HE and checks the results
against the reference engine with `xweb verify-results`.

Usage: xquery_conformance.py <path-to-xweb>. Exits 77 when saxonche is absent.
"""
import os
import subprocess
import sys
import tempfile

try:
    from saxonche import PySaxonProcessor
except ImportError:
    print("saxonche not installed; skipping")
    sys.exit(77)


def run(cmd):
    print("$", " ".join(cmd), flush=True)
    proc = subprocess.run(cmd, capture_output=True, text=True)
    sys.stdout.write(proc.stdout)
    sys.stderr.write(proc.stderr)
    return proc.returncode


def main():
    if len(sys.argv) != 2:
        print(__doc__)
        return 1
    xweb = sys.argv[1]
    with tempfile.TemporaryDirectory(prefix="xweb-xq-") as tmp:
        wh = os.path.join(tmp, "wh")
        queries = os.path.join(tmp, "queries")
        results = os.path.join(tmp, "results")
        os.makedirs(results)
        if run([xweb, "generate", "--sf", "1", "--density", "5e-8", "--divisor", "250", "--pm", "0.2",
                "--po", "0.3", "--seed", "17", "--out", wh]) != 0:
            return 1
        if run([xweb, "export-workload", "--out", queries]) != 0:
            return 1
        with PySaxonProcessor(license=False) as proc:
            xq = proc.new_xquery_processor()
            xq.set_cwd(wh)
            for name in sorted(os.listdir(queries)):
                if not name.endswith(".xq"):
                    continue
                with open(os.path.join(queries, name), encoding="utf-8") as f:
                    text = f.read()
                xq.set_query_base_uri("file://" + wh + "/")
                out = xq.run_query_to_string(query_text=text)
                if out is None:
                    print(f"{name}: Saxon error: {xq.error_message}")
                    return 1
                with open(os.path.join(results, name[:-3] + ".xml"), "w", encoding="utf-8") as f:
                    f.write(out)
        return run([xweb, "verify-results", "--warehouse", wh, "--results", results])


if __name__ == "__main__":
    sys.exit(main())
