"""End-to-end batch experiments, scaled down to run in about a minute.

The same machinery behind the CLI: the lemma-verification suite, one
worst-case CLT configuration (fields -> selector budget -> DP certificate ->
bound comparison), and a small classical functional-CLT run, all emitted as
deterministic reports.
"""

import tempfile
from pathlib import Path

from robustclt import (
    ExperimentConfig,
    emit_report,
    run_classical_fclt_experiment,
    run_thm1_experiment,
    run_verify_lemmas,
)

out = Path(tempfile.mkdtemp(prefix="robustclt-demo-"))

config = ExperimentConfig().override(
    # lemma suite, trimmed grids
    kernel_r=(0.5, 1.0),
    kernel_y_count=60,
    ll4_sets=10,
    ll12_sets=3,
    ll12_n=(4,),
    ll10_n=(4, 16),
    ll10_paths=20_000,
    ll10_depth=16,
    ll11_families=20,
    # one worst-case CLT configuration
    thm1_n=(8,),
    thm1_eps=(0.75,),
    thm1_p=(3.0,),
    thm1_targets=("0.5,1.5",),
    eta=(0.4, 0.2),
    grid_size=2049,
    dp_order=96,
    # small classical run
    fclt_n=(16, 64),
    sn_paths=120,
    ref_factor=4,
    bootstrap=20,
    out_dir=str(out),
)

print("== lemma-verification suite ==")
lemmas = run_verify_lemmas(config)
for row in lemmas.rows:
    print(f"  {'ok ' if row['passed'] else 'FAIL'} {row['check']:<36} {row.get('case','')}")

print("\n== worst-case CLT, one configuration ==")
thm1 = run_thm1_experiment(config)
for row in thm1.rows:
    tag = "vacuous bound" if row.get("vacuous") else "binding bound"
    print(
        f"  {row['check']:<9} n={row['n']} eps={row['eps']}"
        f" observed={row['observed']:+.4f} bound={row['bound']:8.3f} ({tag})"
    )

print("\n== classical functional CLT, small sample ==")
fclt = run_classical_fclt_experiment(config)
for row in fclt.rows:
    if row["check"] == "fclt-bound":
        print(
            f"  n={row['n']:<3} distance={row['observed']:.4f}"
            f" bound={row['bound']:.4f} spread={row['slack']:.4f}"
            f" baseline={row['baseline_bb']:.4f}"
        )

files = []
for report in (lemmas, thm1, fclt):
    files += emit_report(report, ("csv", "json"), out)
print("\nreports written:")
for f in files:
    print("  ", f)
