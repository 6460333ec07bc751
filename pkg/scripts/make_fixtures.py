"""Regenerate the bundled JSON documents in src/liext/data."""

from pathlib import Path

from liext import heis
from liext.cli import algebra_document, dumps, extension_document
from liext.exactlin import Matrix, format_rational
from liext.quadratic import BilinearForm, DoubleExtensionData, double_extension

DATA = Path(__file__).resolve().parent.parent / "src" / "liext" / "data"

# D(v1) = 0, D(v2) = v3, D(v3) = -v2, skew for the standard form on V
EXAMPLE_D = Matrix([[0, 0, 0], [0, 0, -1], [0, 1, 0]])


def documents() -> dict[str, dict]:
    docs = {}
    dd = DoubleExtensionData(3, BilinearForm.identity(3), EXAMPLE_D)
    docs["example-3-2-input.json"] = {
        "name": "example-3-2",
        "dim_v": 3,
        "b_v": [[format_rational(x) for x in row] for row in dd.b_v.gram],
        "d": [[format_rational(x) for x in row] for row in dd.d_map],
    }
    g, b = double_extension(dd)
    docs["example-3-2.json"] = algebra_document(g, "example-3-2", b)
    case = heis.metric_member("1.1", 3)
    docs["case-1-1.json"] = extension_document(heis.to_extension_data(case), "case-1-1", BilinearForm.identity(3))
    for fam in heis.catalog():
        he = fam.template(3)
        name = "family-" + fam.tag.replace(".", "-")
        docs[f"{name}.json"] = extension_document(heis.to_extension_data(he), name)
    return docs


def main():
    for name, doc in documents().items():
        (DATA / name).write_text(dumps(doc))


if __name__ == "__main__":
    main()
