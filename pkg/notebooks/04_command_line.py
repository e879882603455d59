"""
The mask-lab command line
=========================

Drive the same checks through JSON files, as a shell pipeline would.
"""

# %%
import json
import tempfile
from pathlib import Path

import numpy as np

from masklab import io
from masklab.cli import main

work = Path(tempfile.mkdtemp())

# %%
# Build S_F2 and a file with the two basis states, then verify.
main(["build", "sfn", "--d", "2", "--out", str(work / "sfn2.json")])
io.write_json(work / "basis.json", io.state_file_payload("pure", np.eye(2), 2))
code = main(["verify", "--masker", str(work / "sfn2.json"),
             "--states", str(work / "basis.json"), "--out", str(work / "report.json")])
print("exit code", code)
print(io.load_report(work / "report.json")["reference_marginal_a"])

# %%
# Sample a maximal maskable set and check it with S_sharp.
main(["sample", "q_r", "--params", "0.6", "0.8", "--count", "10", "--seed", "1",
      "--out", str(work / "qr.json")])
main(["build", "sharp", "--d", "2", "--out", str(work / "sharp.json")])
main(["verify", "--masker", str(work / "sharp.json"), "--states", str(work / "qr.json"),
      "--out", str(work / "qr_report.json")])

# %%
# Each demo reproduces one result and writes PASS/FAIL per assertion.
main(["demo", "thm22", "--out", str(work / "demo.json")])
for a in json.loads((work / "demo.json").read_text())["assertions"]:
    print(a["result"], a["name"])
