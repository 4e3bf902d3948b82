"""Starts `covsim_cli serve` on a free port and checks /v1/health."""
import json
import re
import subprocess
import sys
import urllib.request

cli, data = sys.argv[1], sys.argv[2]
proc = subprocess.Popen(
    [cli, "serve", "--port", "0", "--counties", f"{data}/counties.csv", "--adjacency", f"{data}/adjacency.csv"],
    stdout=subprocess.PIPE, text=True)
try:
    line = proc.stdout.readline()
    match = re.search(r":(\d+)/v1", line)
    if not match:
        sys.exit(f"no listening line: {line!r}")
    with urllib.request.urlopen(f"http://127.0.0.1:{match.group(1)}/v1/health", timeout=5) as resp:
        body = json.load(resp)
    if resp.status != 200 or body.get("status") != "ok":
        sys.exit(f"unexpected health reply {resp.status} {body}")
    print("health ok")
finally:
    proc.terminate()
    proc.wait(timeout=5)
