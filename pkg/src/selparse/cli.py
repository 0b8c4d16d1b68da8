"""Command-line front end: parse sentences, run corpora, validate resources.

Exit codes: 0 = ran to completion (a rejected sentence is a result, not an
error), 1 = input or configuration error, 2 = batch expectation mismatch.
"""

import argparse
import json
import sys
import textwrap
from dataclasses import dataclass
from pathlib import Path

from . import data
from .grammar import GrammarError, compile_entry, load_declarations, \
    load_lexicon, render_sign
from .parser import UnknownTokenError, parse, tokenize
from .selres import Satisfiable, check_reading
from .sorts import HierarchyError, load_hierarchy


def _add_common(sub):
    sub.add_argument("--hierarchy", default=str(data.HIERARCHY), metavar="PATH")
    sub.add_argument("--lexicon", default=str(data.LEXICON), metavar="PATH")
    sub.add_argument("--decls", default=str(data.DECLS), metavar="PATH")
    sub.add_argument("--method", choices=("bg", "index", "both"), default="both")
    sub.add_argument("--explain", action="store_true",
                     help="render the sign of each surviving reading")
    sub.add_argument("--json", dest="json_lines", action="store_true",
                     help="emit one JSON record per sentence")


def _arg_parser():
    top = argparse.ArgumentParser(
        prog="selparse",
        description="Parse sentences under selectional restrictions, either "
                    "checked after parsing (bg) or enforced during parsing "
                    "via index sorts (index).")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse one sentence")
    _add_common(p)
    p.add_argument("sentence")
    p.set_defaults(func=cmd_parse)

    b = sub.add_parser("batch", help="run a corpus of annotated sentences")
    _add_common(b)
    b.add_argument("corpus", nargs="?", default=str(data.CORPUS))
    b.set_defaults(func=cmd_batch)

    v = sub.add_parser("validate",
                       help="check the hierarchy, declarations and lexicon")
    _add_common(v)
    v.set_defaults(func=cmd_validate)
    return top


def _load_resources(args):
    hierarchy = load_hierarchy(Path(args.hierarchy).read_text())
    decls = load_declarations(Path(args.decls).read_text(), hierarchy)
    lexicon = load_lexicon(Path(args.lexicon).read_text(), hierarchy, decls)
    return hierarchy, lexicon, decls


@dataclass
class MethodReport:
    method: str
    pre_filter: int
    post_filter: int
    surviving: list   # (Reading, {var: sort})
    violations: list  # (Reading, Violation)


def run_method(tokens, hierarchy, lexicon, decls, method):
    """Parse one sentence under one method and report counts and survivors."""
    baseline = parse(tokens, lexicon, decls, hierarchy, "bg")
    if method == "bg":
        surviving, violations = [], []
        for reading in baseline:
            result = check_reading(reading, hierarchy)
            if isinstance(result, Satisfiable):
                surviving.append((reading, dict(result.assignment)))
            else:
                violations.append((reading, result))
        return MethodReport("bg", len(baseline), len(surviving),
                            surviving, violations)
    readings = parse(tokens, lexicon, decls, hierarchy, "index")
    surviving = []
    for reading in readings:
        numbers = reading.sign.index_numbering(hierarchy)
        surviving.append((reading,
                          {var: node.sort for node, var in numbers.items()}))
    return MethodReport("index", len(baseline), len(readings), surviving, [])


def _senses(reading, lexicon):
    out = []
    for leaf in reading.derivation.leaves():
        word = leaf.entry.phon
        if len(lexicon[word]) > 1:
            out.append(f"{word}={leaf.entry.sense_id}")
    return out


def _reading_json(reading, assignment, lexicon):
    return {
        "derivation": reading.derivation_string,
        "senses": _senses(reading, lexicon),
        "assignment": {str(var): sort
                       for var, sort in sorted(assignment.items())},
    }


def _violation_json(reading, violation, lexicon):
    return {
        "derivation": reading.derivation_string,
        "senses": _senses(reading, lexicon),
        "message": violation.narrative,
    }


def _record(sentence, method, reports, agree, lexicon):
    if method == "both":
        bg, index = reports
        record = {
            "sentence": sentence,
            "method": "both",
            "pre_filter": bg.pre_filter,
            "post_filter": index.post_filter,
            "readings": [_reading_json(r, a, lexicon)
                         for r, a in index.surviving],
            "violations": [_violation_json(r, v, lexicon)
                           for r, v in bg.violations],
            "agree": agree,
        }
    else:
        rep = reports[0]
        record = {
            "sentence": sentence,
            "method": rep.method,
            "pre_filter": rep.pre_filter,
            "post_filter": rep.post_filter,
            "readings": [_reading_json(r, a, lexicon)
                         for r, a in rep.surviving],
            "violations": [_violation_json(r, v, lexicon)
                           for r, v in rep.violations],
        }
    return record


def _print_report(sentence, reports, agree, hierarchy, lexicon, explain):
    print(f"sentence: {sentence}")
    for rep in reports:
        print(f"method={rep.method} pre_filter={rep.pre_filter} "
              f"post_filter={rep.post_filter}")
        for reading, assignment in rep.surviving:
            print(f"  reading: {reading.derivation_string}")
            senses = _senses(reading, lexicon)
            if senses:
                print("    senses: " + " ".join(senses))
            if assignment:
                print("    sorts: " + " ".join(
                    f"{var}={sort}" for var, sort in sorted(assignment.items())))
            if explain:
                print(textwrap.indent(render_sign(reading.sign, hierarchy),
                                      "    "))
        for reading, violation in rep.violations:
            print(f"  {violation.narrative}")
            print(f"    derivation: {reading.derivation_string}")
    if agree is not None:
        print("agreement: " + ("yes" if agree else "NO"))


def _analyze(args, tokens, hierarchy, lexicon, decls):
    methods = ["bg", "index"] if args.method == "both" else [args.method]
    reports = [run_method(tokens, hierarchy, lexicon, decls, m)
               for m in methods]
    agree = None
    if args.method == "both":
        identities = [{r.identity for r, _ in rep.surviving} for rep in reports]
        agree = identities[0] == identities[1]
    return reports, agree


def cmd_parse(args):
    hierarchy, lexicon, decls = _load_resources(args)
    tokens = tokenize(args.sentence)
    if not tokens:
        raise GrammarError("empty sentence")
    reports, agree = _analyze(args, tokens, hierarchy, lexicon, decls)
    sentence = " ".join(tokens)
    if args.json_lines:
        print(json.dumps(_record(sentence, args.method, reports, agree, lexicon)))
    else:
        _print_report(sentence, reports, agree, hierarchy, lexicon, args.explain)
    return 0


def _load_corpus(text):
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sentence, sep, rest = line.partition("=>")
        sentence = sentence.strip()
        if not sep or not sentence:
            raise GrammarError(f"corpus line {lineno}: expected '<sentence> => "
                               "accept|reject[, readings=<n>]'")
        parts = [p.strip() for p in rest.split(",")]
        verdict = parts[0].lower()
        if verdict not in ("accept", "reject"):
            raise GrammarError(
                f"corpus line {lineno}: expected accept or reject, "
                f"got {parts[0]!r}")
        expected_readings = None
        for annotation in parts[1:]:
            key, sep, value = annotation.partition("=")
            if key.strip() == "readings" and sep and value.strip().isdigit():
                expected_readings = int(value)
            else:
                raise GrammarError(
                    f"corpus line {lineno}: bad annotation {annotation!r}")
        rows.append((sentence, verdict == "accept", expected_readings))
    return rows


def cmd_batch(args):
    hierarchy, lexicon, decls = _load_resources(args)
    rows = _load_corpus(Path(args.corpus).read_text())
    failures = 0
    for sentence, expect_accept, expected_readings in rows:
        tokens = tokenize(sentence)
        reports, agree = _analyze(args, tokens, hierarchy, lexicon, decls)
        problems = []
        for rep in reports:
            accepted = rep.post_filter > 0
            if accepted != expect_accept:
                problems.append(
                    f"{rep.method}: {'accepted' if accepted else 'rejected'}")
            elif expect_accept and expected_readings is not None \
                    and rep.post_filter != expected_readings:
                problems.append(f"{rep.method}: readings={rep.post_filter}")
        if agree is False:
            problems.append("methods disagree")
        status = "PASS" if not problems else "FAIL"
        if problems:
            failures += 1
        if args.json_lines:
            record = _record(sentence, args.method, reports, agree, lexicon)
            record["expected"] = "accept" if expect_accept else "reject"
            record["status"] = status
            print(json.dumps(record))
        else:
            got = " ".join(f"{rep.method}={rep.pre_filter}/{rep.post_filter}"
                           for rep in reports)
            expected = "accept" if expect_accept else "reject"
            if expected_readings is not None:
                expected += f"({expected_readings})"
            line = f"{status}  {sentence}  expected={expected} got {got}"
            if problems:
                line += "  [" + "; ".join(problems) + "]"
            print(line)
    if not args.json_lines:
        print(f"{len(rows) - failures}/{len(rows)} sentences as expected")
    return 2 if failures else 0


def cmd_validate(args):
    code = 0
    try:
        hierarchy = load_hierarchy(Path(args.hierarchy).read_text())
    except (HierarchyError, OSError) as exc:
        print(f"hierarchy: ERROR {exc}")
        return 1
    print(f"hierarchy: {len(hierarchy)} sorts, root {hierarchy.root!r}, acyclic")
    violations = hierarchy.bcpo_violations()
    if violations:
        for a, b, mlbs in violations:
            print(f"bcpo: violation ({a}, {b}) share "
                  "{" + ", ".join(sorted(mlbs)) + "}")
        code = 1
    else:
        print("bcpo: ok")
    try:
        decls = load_declarations(Path(args.decls).read_text(), hierarchy)
        print(f"declarations: {len(decls)} qfpsoas")
        lexicon = load_lexicon(Path(args.lexicon).read_text(), hierarchy, decls)
        entries = sum(len(senses) for senses in lexicon.values())
        print(f"lexicon: {entries} entries for {len(lexicon)} words")
        for senses in lexicon.values():
            for entry in senses:
                for method in ("bg", "index"):
                    compile_entry(entry, decls, method, hierarchy)
        print("compilation: ok")
    except (GrammarError, OSError) as exc:
        print(f"resources: ERROR {exc}")
        return 1
    return code


def main(argv=None):
    args = _arg_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HierarchyError, GrammarError, UnknownTokenError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry():
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
