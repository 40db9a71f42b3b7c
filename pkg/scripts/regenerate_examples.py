"""Rewrite the shipped example XML assets from their builders.

Run after changing an example builder or the XML schema, then commit the
regenerated files (golden tests compare them byte-for-byte).
"""

from pathlib import Path

from blockea.examples import EXAMPLES
from blockea.xmlio import serialize_xml

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "blockea" / "data"


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for example in EXAMPLES.values():
        text = serialize_xml(example.build())
        path = DATA_DIR / example.asset
        path.write_text(text, "utf-8")
        print(f"wrote {path} ({len(text.splitlines())} lines)")


if __name__ == "__main__":
    main()
