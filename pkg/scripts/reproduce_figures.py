"""Write the CSVs behind every figure and print a short summary.

    python3 scripts/reproduce_figures.py [OUT_DIR]

Plot them afterwards with the gnuplot scripts in docs/.
"""

import sys
from pathlib import Path

from timedcavity.scenarios import PRESETS, first_peak, run


def main(out_dir="out"):
    out = Path(out_dir)
    status = 0
    for name, preset in PRESETS.items():
        report = run(preset.curves, out, name)
        print(f"{name}: {preset.description}")
        for r in report.results:
            if r.error:
                status = 3
                print(f"  {r.label:22s} FAILED {r.error}")
                continue
            ts = r.series
            tp, pp = first_peak(ts.t, ts["p_cav"])
            print(f"  {r.label:22s} first peak p_cav={pp:.4f} at t={tp:.2f}  "
                  f"p_dark(5)={ts['p_dark'][-1]:.3e}  p_atom(5)={ts['p_atom'][-1]:.3e}")
    return status


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
