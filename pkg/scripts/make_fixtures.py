#!/usr/bin/env python3
"""Regenerate the bundled fixture problems and corpora under fixtures/.

The tables are synthetic stand-ins shaped like the study's problems; each
repair-type corpus entry is constructed so that a specific pipeline stage
is the first to succeed on it (asserted by the test suite).
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def table(name, columns, rows):
    return {
        "name": name,
        "columns": [{"name": n, "type": t} for n, t in columns],
        "rows": [list(r) for r in rows],
    }


def problem(pid, description, source, dest_columns, dest_rows, ordered=False, extra_pairs=()):
    pairs = [
        {
            "source": source,
            "destination": table("expected", dest_columns, dest_rows),
        }
    ]
    for src, rows in extra_pairs:
        pairs.append(
            {"source": src, "destination": table("expected", dest_columns, rows)}
        )
    return {
        "id": pid,
        "description": description,
        "ordered": ordered,
        "pairs": pairs,
    }


def main() -> None:
    problems = []

    fruit_cols = [
        ("item", "str"),
        ("price", "int"),
        ("quantity", "int"),
        ("country", "str"),
        ("seller", "str"),
    ]
    fruit_rows = [
        ["apples", 7, 500, "US", "Joe's Fruits"],
        ["bananas", 3, 400, "MX", "Nancy's Produce"],
        ["oranges", 11, 300, "MA", "Ahmed's Fruits"],
        ["grapes", 1, 200, "US", "Raj's Vinyard"],
    ]
    problems.append(
        problem(
            "fruitSellers",
            "Sellers of cheap fruit: find the US seller with small stock.",
            table("fruitSellers", fruit_cols, fruit_rows),
            [("item", "str"), ("price", "int"), ("quantity", "int"), ("country", "str")],
            [["grapes", 1, 200, "US"]],
        )
    )

    alpha_cols = [("name", "str"), ("min", "int"), ("max", "int")]
    alpha_rows = [["a", 0, 5], ["b", 1, 7], ["c", 2, 9], ["d", 0, 4]]
    problems.append(
        problem(
            "alpha",
            "Rows whose minimum is below one.",
            table("alpha", alpha_cols, alpha_rows),
            alpha_cols,
            [["a", 0, 5], ["d", 0, 4]],
        )
    )

    bravo_cols = [("CUI1", "str"), ("RUI", "str"), ("CUI2", "str"), ("REL", "str")]
    bravo_rows = [
        ["A1", "R1", "C0364349", "RB"],
        ["A2", "R2", "C0364349", "RO"],
        ["A1", "R2", "C0000039", "RO"],
        ["A2", "R1", "C1000000", "SY"],
    ]
    problems.append(
        problem(
            "bravo",
            "Relations pointing at one concept.",
            table("bravo", bravo_cols, bravo_rows),
            [("CUI1", "str"), ("RUI", "str")],
            [["A1", "R1"], ["A2", "R2"]],
        )
    )

    charlie_cols = [("CODE", "str"), ("VAL", "int")]
    problems.append(
        problem(
            "charlie",
            "Rows with small values (two table pairs).",
            table("charlie", charlie_cols, [["u", 4], ["v", 12], ["w", 7], ["x", 15]]),
            charlie_cols,
            [["u", 4], ["w", 7]],
            extra_pairs=[
                (
                    table("charlie", charlie_cols, [["p", 9], ["q", 11], ["r", 3]]),
                    [["p", 9], ["r", 3]],
                )
            ],
        )
    )

    delta_cols = [("RSAB", "str"), ("TFR", "int"), ("CFR", "int"), ("SF", "str")]
    delta_rows = [
        ["AIR", 470, 1696, "s1"],
        ["ALT", 1850, 1834, "s2"],
        ["AOD", 1965, 1865, "s3"],
        ["BRO", 2100, 1901, "s4"],
    ]
    delta_out = [("RSAB", "str"), ("TFR", "int"), ("CFR", "int")]
    problems.append(
        problem(
            "delta",
            "Sources with low case frequency.",
            table("delta", delta_cols, delta_rows),
            delta_out,
            [["AIR", 470, 1696], ["ALT", 1850, 1834]],
        )
    )
    problems.append(
        problem(
            "delta_operators",
            "The source with term frequency exactly 1850.",
            table("delta", delta_cols, delta_rows),
            delta_out,
            [["ALT", 1850, 1834]],
        )
    )
    problems.append(
        problem(
            "delta_ops_unit",
            "Sources with term frequency up to 1965.",
            table("delta", delta_cols, delta_rows),
            delta_out,
            [["AIR", 470, 1696], ["ALT", 1850, 1834], ["AOD", 1965, 1865]],
        )
    )

    echo_cols = [("TTY", "str"), ("MRRANK_RANK", "int")]
    echo_rows = [["PT", 384], ["SY", 112], ["AB", 256], ["FN", 77]]
    problems.append(
        problem(
            "echo",
            "All rows ordered by rank, lowest first.",
            table("echo", echo_cols, echo_rows),
            echo_cols,
            [["FN", 77], ["SY", 112], ["AB", 256], ["PT", 384]],
            ordered=True,
        )
    )

    foxtrot_cols = [("TTY", "str"), ("CODE", "str")]
    foxtrot_rows = [["PT", "c1"], ["AB", "c2"], ["PT", "c3"], ["SY", "c4"]]
    problems.append(
        problem(
            "foxtrot",
            "Preferred terms only.",
            table("foxtrot", foxtrot_cols, foxtrot_rows),
            foxtrot_cols,
            [["PT", "c1"], ["PT", "c3"]],
        )
    )

    golf_cols = [("SAB", "str"), ("SVER", "int")]
    golf_rows = [["s1", 1995], ["s2", 2000], ["s3", 2005], ["s4", 2005]]
    problems.append(
        problem(
            "golf",
            "Distinct versions before 2005.",
            table("golf", golf_cols, golf_rows),
            [("SVER", "int")],
            [[1995], [2000]],
        )
    )
    problems.append(
        problem(
            "golf_misc",
            "A version that never shipped (unsatisfiable stand-in).",
            table("golf", golf_cols, golf_rows),
            [("SVER", "int")],
            [[1999]],
        )
    )

    hotel_cols = [("CUI", "str"), ("STN", "str"), ("TUI", "str")]
    hotel_rows = [["C1", "S1", "T1"], ["C2", "S2", "T2"], ["C3", "S3", "T3"]]
    problems.append(
        problem(
            "hotel",
            "Concepts with tree and type identifiers, type before tree.",
            table("hotel", hotel_cols, hotel_rows),
            [("CUI", "str"), ("TUI", "str"), ("STN", "str")],
            [["C1", "T1", "S1"], ["C2", "T2", "S2"], ["C3", "T3", "S3"]],
        )
    )

    juliett_cols = [
        ("LAT", "str"),
        ("STT", "str"),
        ("ISPREF", "str"),
        ("TS", "str"),
        ("CUI", "str"),
        ("CVF", "int"),
    ]
    juliett_rows = [
        ["ENG", "PF", "Y", "P", "C1", 256],
        ["ENG", "VC", "N", "S", "C2", 128],
        ["SPA", "PF", "Y", "P", "C3", 256],
        ["ENG", "PF", "N", "S", "C4", 512],
    ]
    problems.append(
        problem(
            "juliett",
            "Language, string type, and preference of preferred terms.",
            table("juliett", juliett_cols, juliett_rows),
            [("LAT", "str"), ("STT", "str"), ("ISPREF", "str")],
            [["ENG", "PF", "Y"], ["SPA", "PF", "Y"]],
        )
    )
    problems.append(
        problem(
            "juliett_join",
            "Needs data from a second table (unsatisfiable stand-in).",
            table("juliett", juliett_cols, juliett_rows),
            [("LAT", "str"), ("STT", "str"), ("ISPREF", "str")],
            [["FRE", "VCW", "N"]],
        )
    )
    problems.append(
        problem(
            "juliett_distinct",
            "Distinct language/string-type/preference triples.",
            table(
                "juliett",
                juliett_cols,
                juliett_rows + [["ENG", "PF", "Y", "P", "C5", 256]],
            ),
            [("LAT", "str"), ("STT", "str"), ("ISPREF", "str")],
            [["ENG", "PF", "Y"], ["ENG", "VC", "N"], ["SPA", "PF", "Y"], ["ENG", "PF", "N"]],
        )
    )
    problems.append(
        problem(
            "juliett_ops",
            "Languages of rows outside the common content view.",
            table("juliett", juliett_cols, juliett_rows),
            [("LAT", "str")],
            [["ENG"], ["ENG"]],
        )
    )

    probdir = FIXTURES / "problems"
    probdir.mkdir(parents=True, exist_ok=True)
    for p in problems:
        (probdir / f"{p['id']}.json").write_text(json.dumps(p, indent=2) + "\n")

    # One corpus entry per repair type; the stage named in "expect_stage"
    # must be the first to succeed (checked by tests/test_acceptance.py).
    tablev = [
        {"problem": "alpha", "query": "SELECT * FROM alpha WHERE min==0",
         "expect_stage": "OperatorMismatch"},
        {"problem": "hotel", "query": "SELECT CUI, TUI FROM hotel",
         "expect_stage": "ColumnMismatch"},
        {"problem": "bravo", "query": "SELECT CUI1, RUI FROM bravo WHERE CUI2 = C0364349",
         "expect_stage": "StringRepair"},
        {"problem": "delta", "query": "SELECT RSAB, TFR, CFR FROM delta WHERE CFR < 1834",
         "expect_stage": "ConstantSynthesis"},
        {"problem": "delta_operators", "query": "SELECT RSAB, TFR, CFR FROM delta WHERE TFR < 1850",
         "expect_stage": "OperatorSynthesis"},
        {"problem": "bravo", "query": "SELECT CUI1, RUI FROM bravo WHERE REL = 'RO'",
         "expect_stage": "ColumnSynthesis"},
        {"problem": "bravo", "query": "SELECT CUI1, RUI FROM bravo WHERE REL = 'RO' OR RUI != 'R9'",
         "expect_stage": "ClauseRemoval"},
        {"problem": "bravo", "query": "SELECT CUI1, RUI FROM bravo",
         "expect_stage": "ClauseSynthesis"},
    ]
    with (FIXTURES / "corpus_tablev.jsonl").open("w") as fh:
        for i, rec in enumerate(tablev):
            rec = {"problem": rec["problem"], "query": rec["query"],
                   "participant": f"p{i:02d}", "expect_stage": rec["expect_stage"]}
            fh.write(json.dumps(rec) + "\n")

    # Triage corpus: representative wrong submissions plus two correct ones.
    triage = [
        # syntax-error family
        {"problem": "bravo", "query": "SELECT RUI FROM bravo WHERE CUI1 == 'C0000039'",
         "expect_verdict": "syntax_error", "expect_category": "BrokenOperator"},
        {"problem": "juliett", "query": "SELECT DISTINCT CUI FROM juliett, india WHERE juliett.CUI = india.CUI",
         "expect_verdict": "syntax_error", "expect_category": "ColumnReferenceError"},
        {"problem": "foxtrot", "query": "SELECT * FROM foxtrot WHERE TTY = PT",
         "expect_verdict": "syntax_error", "expect_category": "QuotesOnStrings"},
        {"problem": "echo", "query": "SELECT DISTINCT WHERE MRRANK_RANK < 384;",
         "expect_verdict": "syntax_error", "expect_category": "IncompleteQuery"},
        {"problem": "juliett", "query": "select LAT, STT, ISPREF distinct from juliett",
         "expect_verdict": "syntax_error", "expect_category": "WrongOrder"},
        {"problem": "juliett", "query": "SELECT STT, ISPREF FROM juliett WHERE india.CUI = juliett.CUI",
         "expect_verdict": "syntax_error", "expect_category": "TableReferenceError"},
        {"problem": "bravo", "query": "SELECT CUI1, RUI, FROM bravo WHERE CUI2 = 'C0364349'",
         "expect_verdict": "syntax_error", "expect_category": "ExtraCommas"},
        {"problem": "delta", "query": "SELECT RSAB TFR CFR FROM delta WHERE TFR > 470",
         "expect_verdict": "syntax_error", "expect_category": "MissingCommas"},
        {"problem": "hotel", "query": "SELECT CUI, STN, TUI from hotelORDER BY TUI DESC",
         "expect_verdict": "syntax_error", "expect_category": "MiscSyntax"},
        # semantic-error family
        {"problem": "charlie", "query": "SELECT * FROM charlie",
         "expect_verdict": "semantic_error", "expect_category": "WrongSubclausesInWhere"},
        {"problem": "juliett_distinct", "query": "SELECT LAT, STT, ISPREF FROM juliett",
         "expect_verdict": "semantic_error", "expect_category": "MissingOrExtraOperator"},
        {"problem": "golf", "query": "SELECT DISTINCT SVER FROM golf WHERE SVER < 2000",
         "expect_verdict": "semantic_error", "expect_category": "WrongValuesInWhere"},
        {"problem": "echo", "query": "SELECT DISTINCT * FROM echo ORDER BY MRRANK_RANK DESC",
         "expect_verdict": "semantic_error", "expect_category": "WrongOrdering"},
        {"problem": "juliett", "query": "SELECT LAT FROM juliett",
         "expect_verdict": "semantic_error", "expect_category": "ColumnMismatch"},
        {"problem": "juliett_ops", "query": "SELECT LAT FROM juliett WHERE CVF = 256",
         "expect_verdict": "semantic_error", "expect_category": "WrongOperatorInWhere"},
        {"problem": "juliett_join", "query": "SELECT LAT, STT, ISPREF from juliett where TS='S';",
         "expect_verdict": "semantic_error", "expect_category": "MiscSemantic"},
        {"problem": "golf_misc", "query": "SELECT DISTINCT SVER FROM golf;",
         "expect_verdict": "semantic_error", "expect_category": "MiscSemantic"},
        # correct submissions
        {"problem": "alpha", "query": "SELECT * FROM alpha WHERE min < 1",
         "expect_verdict": "correct"},
        {"problem": "echo", "query": "SELECT * FROM echo ORDER BY MRRANK_RANK",
         "expect_verdict": "correct"},
    ]
    with (FIXTURES / "corpus_triage.jsonl").open("w") as fh:
        for i, rec in enumerate(triage):
            rec = {"problem": rec["problem"], "query": rec["query"],
                   "participant": f"t{i:02d}",
                   **{k: v for k, v in rec.items() if k.startswith("expect")}}
            fh.write(json.dumps(rec) + "\n")

    # Seed pool for the practice service's "written by others" vote options.
    gold = {
        "fruitSellers": "SELECT item, price, quantity, country FROM fruitSellers WHERE country = 'US' AND quantity < 300",
        "alpha": "SELECT * FROM alpha WHERE min < 1",
        "bravo": "SELECT CUI1, RUI FROM bravo WHERE CUI2 = 'C0364349'",
        "charlie": "SELECT * FROM charlie WHERE VAL < 10",
        "delta": "SELECT RSAB, TFR, CFR FROM delta WHERE CFR < 1865",
        "delta_operators": "SELECT RSAB, TFR, CFR FROM delta WHERE TFR = 1850",
        "delta_ops_unit": "SELECT RSAB, TFR, CFR FROM delta WHERE TFR <= 1965",
        "echo": "SELECT * FROM echo ORDER BY MRRANK_RANK",
        "foxtrot": "SELECT * FROM foxtrot WHERE TTY = 'PT'",
        "golf": "SELECT DISTINCT SVER FROM golf WHERE SVER < 2005",
        "golf_misc": "SELECT DISTINCT SVER FROM golf WHERE SVER < 2005",
        "hotel": "SELECT CUI, TUI, STN FROM hotel",
        "juliett": "SELECT LAT, STT, ISPREF FROM juliett WHERE TS = 'P'",
        "juliett_join": "SELECT LAT, STT, ISPREF FROM juliett WHERE TS = 'S'",
        "juliett_distinct": "SELECT DISTINCT LAT, STT, ISPREF FROM juliett",
        "juliett_ops": "SELECT LAT FROM juliett WHERE CVF != 256",
    }
    def lowered(text: str) -> str:
        for kw in ("SELECT", "DISTINCT", "FROM", "WHERE", "ORDER BY", "AND", "OR", "AS"):
            text = text.replace(kw + " ", kw.lower() + " ")
        return text

    # Texts differ from the canonical form so vote cards don't consolidate.
    pool = {
        pid: {
            "correct": [lowered(text), text + " ;"],
            "repaired": [text + ";"],
        }
        for pid, text in gold.items()
    }
    (FIXTURES / "vote_pool.json").write_text(json.dumps(pool, indent=2) + "\n")
    print(f"wrote {len(problems)} problems + corpora under {FIXTURES}")


if __name__ == "__main__":
    main()
