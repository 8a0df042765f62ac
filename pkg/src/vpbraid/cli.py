"""Command-line front end: ``vpbraid <subcommand> ...``.

Exit status: 0 on success, 1 on domain errors, 2 on usage errors (bad arguments,
unparseable words, operands with different strand counts).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import combing, diagram, homotopy, invariants, presentation
from .word import (
    BraidError,
    BraidWord,
    StrandCountMismatch,
    expand_sigma,
    format_word,
    free_reduce,
    invert,
    multiply,
    parse_word,
    delete_strand,
)

GRAMMAR = (
    "word grammar: 'n=<int>;' followed by whitespace-separated tokens "
    "l(<i>,<j>) or l(<i>,<j>)^-1 (s(<i>,<j>) expands sigma_ij); '#' starts a comment"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_words(args, count: int) -> list[BraidWord]:
    words = [args.words] if isinstance(args.words, str) else (args.words or [])
    inline = [w for w in words if w is not None]
    files = args.file or []
    if bool(inline) == bool(files):
        raise UsageError(f"give {count} word(s) either inline or with --file, not both or neither")
    texts = []
    for item in inline:
        texts.append(sys.stdin.read() if item == "-" else item)
    for path in files:
        texts.append(sys.stdin.read() if path == "-" else Path(path).read_text())
    if len(texts) != count:
        raise UsageError(f"expected {count} word(s), got {len(texts)}")
    words = []
    for text in texts:
        try:
            words.append(parse_word(text))
        except BraidError as exc:
            raise UsageError(f"{exc}\n{GRAMMAR}") from exc
    if len({w.strand_count for w in words}) > 1:
        raise UsageError("mismatched n: " + ", ".join(str(w.strand_count) for w in words))
    return words


def _budget(args) -> presentation.SearchBudget:
    try:
        return presentation.SearchBudget(args.budget_depth, args.budget_states, args.budget_length)
    except BraidError as exc:
        raise UsageError(str(exc)) from exc


def _word_result(w: BraidWord):
    return [format_word(w)], {"word": format_word(w), "length": len(w)}


def cmd_parse(args):
    return _word_result(_read_words(args, 1)[0])


def cmd_mul(args):
    a, b = _read_words(args, 2)
    return _word_result(multiply(a, b))


def cmd_inv(args):
    return _word_result(invert(_read_words(args, 1)[0]))


def cmd_reduce(args):
    return _word_result(free_reduce(_read_words(args, 1)[0]))


def cmd_delete_strand(args):
    return _word_result(delete_strand(_read_words(args, 1)[0], args.strand))


def cmd_expand_sigma(args):
    return _word_result(expand_sigma(args.i, args.j, args.n))


def _pair_records(m):
    return m.records(), {"entries": [{"pair": list(k), "value": v} for k, v in m.items()]}


def cmd_exp_vector(args):
    return _pair_records(invariants.exponent_vector(_read_words(args, 1)[0]))


def cmd_link(args):
    return _pair_records(invariants.linking_matrix(_read_words(args, 1)[0]))


def cmd_comb(args):
    d = combing.comb(_read_words(args, 1)[0])
    return d.report().splitlines(), d.to_dict()


def cmd_kernel_form(args):
    w = _read_words(args, 1)[0]
    top = args.top or w.strand_count
    form = combing.kernel_conjugate_form(w, top)
    lines = [f"length {form.length}"]
    lines += [f"factor {v} | {a}" for v, a in form.factors]
    lines += [f"residual {form.residual}", f"verified {str(form.verified).lower()}"]
    data = {
        "top": top,
        "length": form.length,
        "factors": [{"conjugator": str(v), "letter": str(a)} for v, a in form.factors],
        "residual": str(form.residual),
        "verified": form.verified,
    }
    return lines, data


def cmd_gen(args):
    spec = homotopy.HomotopyGeneratorSpec(
        args.n, args.i, args.j, homotopy.parse_classical(args.ga), homotopy.parse_classical(args.gb), args.x
    )
    w = homotopy.make_generator(spec)
    return [f"gen {spec.format()}", format_word(w)], {"spec": spec.to_dict(), "word": format_word(w)}


def cmd_enum_gens(args):
    lines, items = [], []
    for count, (spec, w) in enumerate(homotopy.enumerate_generators(args.n, args.max_factor_len)):
        if args.limit is not None and count >= args.limit:
            break
        lines.append(f"gen {spec.format()} :: {format_word(w)}")
        items.append({"spec": spec.to_dict(), "word": format_word(w)})
    return lines, {"generators": items}


def cmd_member(args):
    w = _read_words(args, 1)[0]
    verdict = homotopy.is_homotopic_to_identity(w, _budget(args), max_factor_len=args.max_factor_len)
    return verdict.lines(), verdict.to_dict()


def cmd_equiv(args):
    a, b = _read_words(args, 2)
    variant = presentation.RelationVariant(args.relations)
    verdict = presentation.equivalent_bounded(a, b, _budget(args), variant)
    return verdict.lines(), verdict.to_dict()


def cmd_render(args):
    w = _read_words(args, 1)[0]
    svg = diagram.to_svg(diagram.layout(w), args.scale_x, args.scale_y)
    if args.output:
        Path(args.output).write_bytes(svg)
        return [f"wrote {args.output}"], {"output": args.output, "bytes": len(svg)}
    return [svg.decode().rstrip("\n")], {"svg": svg.decode()}


def cmd_validate_relations(args):
    variants = ["corrected", "printed"] if args.variant == "both" else [args.variant]
    reports = [presentation.validate_relation_set(presentation.RelationVariant(v), args.max_n) for v in variants]
    lines = [ln for r in reports for ln in r.lines()]
    return lines, {"reports": [r.to_dict() for r in reports]}


def _add_words(p, count: int):
    p.add_argument("words", nargs="*" if count > 1 else "?", metavar="WORD", help="word text, or '-' for stdin")
    p.add_argument("-f", "--file", action="append", metavar="PATH", help="read a word from a file (repeatable)")


def _add_budget(p):
    p.add_argument("--budget-depth", type=int, default=6)
    p.add_argument("--budget-states", type=int, default=100_000)
    p.add_argument("--budget-length", type=int, default=40)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="structured output")
    parser = _Parser(prog="vpbraid", description="Pure virtual braid words and homotopy to the identity.",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, words=0, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        if words:
            _add_words(p, words)
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, 1, help="parse and normalise a word")
    add("mul", cmd_mul, 2, help="concatenate two words")
    add("inv", cmd_inv, 1, help="invert a word")
    add("reduce", cmd_reduce, 1, help="free reduction")
    p = add("delete-strand", cmd_delete_strand, 1, help="forget one strand")
    p.add_argument("--strand", "-i", type=int, required=True)
    p = add("expand-sigma", cmd_expand_sigma, help="classical generator sigma_ij as a lambda word")
    for name in ("i", "j", "n"):
        p.add_argument(name, type=int)
    add("exp-vector", cmd_exp_vector, 1, help="exponent sums")
    add("link", cmd_link, 1, help="linking numbers")
    add("comb", cmd_comb, 1, help="normal form w_2 ... w_n")
    p = add("kernel-form", cmd_kernel_form, 1, help="conjugate-product form of a kernel word")
    p.add_argument("--top", type=int, help="top strand (default: strand count)")
    p = add("gen", cmd_gen, help="one generator of the identity-homotopic subgroup")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--ga", default="-", help="classical word, e.g. 's(1,3).s(1,2)^-1'")
    p.add_argument("--gb", default="-")
    p.add_argument("--x", action="store_true", help="insert the x braid")
    p = add("enum-gens", cmd_enum_gens, help="enumerate generators")
    p.add_argument("n", type=int)
    p.add_argument("--max-factor-len", type=int, default=0)
    p.add_argument("--limit", type=int)
    p = add("member", cmd_member, 1, help="test homotopy to the identity")
    _add_budget(p)
    p.add_argument("--max-factor-len", type=int, default=2)
    p = add("equiv", cmd_equiv, 2, help="bounded equivalence search")
    _add_budget(p)
    p.add_argument("--relations", choices=["corrected", "printed"], default="corrected")
    p = add("render", cmd_render, 1, help="SVG diagram")
    p.add_argument("-o", "--output")
    p.add_argument("--scale-x", type=float, default=40.0)
    p.add_argument("--scale-y", type=float, default=40.0)
    p = add("validate-relations", cmd_validate_relations, help="exponent-sum audit of the relations")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--variant", choices=["corrected", "printed", "both"], default="both")
    return parser


def run(argv) -> tuple[int, str, str]:
    """Run one invocation; returns (exit status, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if getattr(args, "func", None) is None:
            raise UsageError(parser.format_usage().strip())
        lines, data = args.func(args)
    except UsageError as exc:
        return 2, "", f"usage error: {exc}\n"
    except StrandCountMismatch as exc:
        return 2, "", f"usage error: {exc}\n"
    except BraidError as exc:
        return 1, "", f"error: {exc}\n"
    if getattr(args, "json", False):
        return 0, json.dumps({"command": args.command, **data}, indent=2) + "\n", ""
    return 0, "".join(line + "\n" for line in lines), ""


def main(argv=None) -> int:
    status, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
