"""Run the Simple Plotting example end to end and export its data.

Usage: python scripts/run_simple_plotting.py [seed] [out_dir]
"""

import sys
from pathlib import Path

from blockea.datalog import derive_meta, export_csv, export_ioh, ioh_file_names
from blockea.events import Print
from blockea.examples import build_simple_plotting
from blockea.interpreter import interpret


def main() -> None:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    out_dir = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("out")
    out_dir.mkdir(parents=True, exist_ok=True)

    program = build_simple_plotting()
    result = interpret(program, seed, lambda e: (
        print(e.text) if isinstance(e, Print) else None
    ))

    (out_dir / "simple_plotting.csv").write_text(export_csv(result.logs), "utf-8")
    meta = derive_meta(program, seed, len(result.logs), "simple-plotting")
    info_text, dat_text = export_ioh(result.logs, meta)
    info_name, dat_name = ioh_file_names(meta)
    (out_dir / info_name).write_text(info_text, "utf-8")
    (out_dir / dat_name).write_text(dat_text, "utf-8")

    gens = [log.records[-1][0] for log in result.logs]
    print(f"{len(result.logs)} runs; generations to optimum: {gens}")
    print(f"exports written to {out_dir}/")


if __name__ == "__main__":
    main()
