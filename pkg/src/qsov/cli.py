"""Command-line front end: compute table entries, act with the separating
operator, and run the verification suites.

Output is deterministic: every collection is emitted in a fixed sorted
order and floating-point residuals are formatted with a fixed precision.
Exit codes: 0 all checks passed (or value computed), 1 at least one check
failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import ast
import cmath
import json
import random
import sys
from importlib.resources import files

from .classical import (
    alpha_reduction_check,
    char_eq_residual,
    genfunc_canonicity_check,
    hamiltonians_commute,
    lax_charpoly_identity_check,
    lax_det_residual,
    random_phase_point,
    real_slice_point,
    separate_numeric,
    separation_constraint_check,
    verify_alpha_identities_classical,
    z_split_check,
)
from .laurent import LaurentPoly
from .macdonald import (
    assert_weight,
    hamiltonian,
    macdonald_poly,
    monomial_sym,
    weight_sort_key,
)
from .numeric import (
    aw_integral_check,
    mab_numeric_check,
    mab_rpoly_check,
    orthogonality_check,
    qint_sep_poly_check,
)
from .qseries import (
    andrews_identity_check,
    asympt_dilog_check,
    pq_lemma_check,
    vwp_sum_check,
)
from .render import laurent_str, mbasis_str, ratfunc_str, seppoly_str
from .ring import RatFunc
from .seppoly import (
    sep_eq_residual,
    sep_poly,
    sep_poly_via_series,
)
from .sov import (
    act_mab_pm_concrete,
    alpha_12_consistent,
    apply_m,
    c_lambda,
    cn_identity,
    cubic_split_check,
    factorized_image,
    kernel_shift_identity,
    mab_inversion_bookkeeping,
    mab_pm_specialization,
    minv_qdiff_matches_algebraic,
    p_basis_poly,
    quantum_alpha_identities,
    starred_hamiltonians_match_adjoints,
    verify_factorization,
    weighted_shift_identities,
    xi_sum_to_one,
    xi_zero_term_nonzero,
    xik_sum_identity,
)

T_VARS = ("t1", "t2", "t3")
SUITES = (
    "tables",
    "factorization",
    "separated-eq",
    "commutativity",
    "classical",
    "appendix-a",
    "appendix-b",
    "numeric",
)


def _parse_weight(text: str):
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ValueError(f"weight {text!r} is not a comma-separated integer list")
    if not parts:
        raise ValueError("weight must be nonempty")
    return assert_weight(parts)


def _weight_key(text: str):
    return weight_sort_key(tuple(int(p) for p in text.split(",")))


def _sweep(lo: int, hi: int):
    """All nondecreasing integer triples with parts in [lo, hi]."""
    if lo > hi:
        raise ValueError("--min must not exceed --max")
    return [
        (a, b, c)
        for a in range(lo, hi + 1)
        for b in range(a, hi + 1)
        for c in range(b, hi + 1)
    ]


# -- expression input for apply-m ---------------------------------------------------


class ExpressionError(ValueError):
    pass


_COEFF_ATOMS = {"q": RatFunc.sym("q"), "l": RatFunc.sym("ell")}


def parse_t_expression(text: str) -> LaurentPoly:
    """Parse sums of monomials in t1, t2, t3 with rational coefficients in q, l.

    Operators: + - * / and ^ (or **) with integer exponents; division only
    by expressions free of the t variables.
    """
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse expression: {exc.msg}") from None
    return _eval_expr(tree.body)


def _eval_expr(node: ast.AST) -> LaurentPoly:
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval_expr(node.left)
            exp = _int_exponent(node.right)
            try:
                return base**exp
            except ValueError as exc:
                raise ExpressionError(str(exc)) from None
        left, right = _eval_expr(node.left), _eval_expr(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_const():
                raise ExpressionError("division only by coefficients free of t1, t2, t3")
            c = right.const_value()
            if c.is_zero():
                raise ExpressionError("division by zero")
            return left.scale(c.inv())
        raise ExpressionError("unsupported operator")
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return -_eval_expr(node.operand)
        if isinstance(node.op, ast.UAdd):
            return _eval_expr(node.operand)
        raise ExpressionError("unsupported unary operator")
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return LaurentPoly.const(T_VARS, RatFunc.from_int(node.value))
        raise ExpressionError("only integer literals are allowed")
    if isinstance(node, ast.Name):
        if node.id in T_VARS:
            return LaurentPoly.var(T_VARS, node.id)
        coeff = _COEFF_ATOMS.get(node.id)
        if coeff is not None:
            return LaurentPoly.const(T_VARS, coeff)
        raise ExpressionError(f"unknown symbol {node.id!r} (use t1, t2, t3, q, l)")
    raise ExpressionError("unsupported syntax in expression")


def _int_exponent(node: ast.AST) -> int:
    sign = 1
    while isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        if isinstance(node.op, ast.USub):
            sign = -sign
        node = node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return sign * node.value
    raise ExpressionError("exponents must be integer literals")


def _is_t12_symmetric(f: LaurentPoly) -> bool:
    for (a, b, c), v in f.terms.items():
        partner = f.terms.get((b, a, c))
        if partner is None or not partner == v:
            return False
    return True


# -- result documents ---------------------------------------------------------------


def _document(command: str, inputs: dict, status: str, payload, residuals: dict) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "status": status,
        "payload": payload,
        "residuals": residuals,
    }


def _emit_value(doc: dict, text: str, as_json: bool) -> int:
    if as_json:
        print(json.dumps(doc, indent=2))
    else:
        print(text)
    return 0


def _fmt_residual(r: float) -> str:
    return format(r, ".3e")


# -- value commands -----------------------------------------------------------------


def cmd_macdonald(weight, as_json: bool) -> int:
    mp = macdonald_poly(weight)
    text = mbasis_str(mp.coeffs)
    coeffs = {
        ",".join(map(str, mu)): ratfunc_str(c)
        for mu, c in sorted(mp.coeffs.items(), key=lambda kv: weight_sort_key(kv[0]))
        if not c.is_zero()
    }
    payload = {"weight": list(weight), "basis": "m", "coefficients": coeffs, "text": text}
    doc = _document("macdonald", {"weight": list(weight)}, "value", payload, {})
    return _emit_value(doc, text, as_json)


def cmd_seppoly(weight, as_json: bool) -> int:
    f = sep_poly(weight) if len(weight) == 3 else sep_poly_via_series(weight)
    text = seppoly_str(f.terms)
    coeffs = {
        str(k): ratfunc_str(c)
        for (k,), c in sorted(f.terms.items())
        if not c.is_zero()
    }
    payload = {"weight": list(weight), "basis": "y", "coefficients": coeffs, "text": text}
    doc = _document("seppoly", {"weight": list(weight)}, "value", payload, {})
    return _emit_value(doc, text, as_json)


def cmd_c(weight, as_json: bool) -> int:
    text = ratfunc_str(c_lambda(weight))
    payload = {"weight": list(weight), "value": text, "text": text}
    doc = _document("c", {"weight": list(weight)}, "value", payload, {})
    return _emit_value(doc, text, as_json)


def cmd_apply_m(expression: str, as_json: bool) -> int:
    f = parse_t_expression(expression)
    if not _is_t12_symmetric(f):
        raise ExpressionError("expression must be symmetric under t1 <-> t2")
    image = apply_m(f)
    text = laurent_str(image.terms, image.vars)
    terms = {
        ",".join(map(str, key)): ratfunc_str(c)
        for key, c in sorted(image.terms.items())
        if not c.is_zero()
    }
    payload = {"variables": list(image.vars), "terms": terms, "text": text}
    doc = _document("apply-m", {"expression": expression}, "value", payload, {})
    return _emit_value(doc, text, as_json)


# -- verify suites ------------------------------------------------------------------
# Each suite returns a list of (name, ok, residual-or-None) in a fixed order.


def _golden(name: str) -> dict:
    return json.loads(files("qsov").joinpath("golden", name).read_text())


def suite_tables(opt) -> list:
    checks = []
    table = _golden("macdonald_table.json")
    for key in sorted(table, key=_weight_key):
        lam = _parse_weight(key)
        got = mbasis_str(macdonald_poly(lam).coeffs)
        checks.append((f"P[{key}]", got == table[key], None))
    table = _golden("seppoly_table.json")
    for key in sorted(table, key=_weight_key):
        lam = _parse_weight(key)
        got = seppoly_str(sep_poly(lam).terms)
        checks.append((f"S[{key}]", got == table[key], None))
    return checks


def suite_factorization(opt) -> list:
    return [
        (f"factor[{a},{b},{c}]", verify_factorization((a, b, c)), None)
        for a, b, c in _sweep(opt.min, opt.max)
    ]


def suite_separated_eq(opt) -> list:
    checks = []
    for lam in _sweep(opt.min, opt.max):
        res = sep_eq_residual(lam, sep_poly(lam))
        checks.append((f"sep-eq[{','.join(map(str, lam))}]", res.is_zero(), None))
    for lam in ((0, 0, 0, 1), (0, 0, 1, 1), (0, 1, 1, 2)):
        res = sep_eq_residual(lam, sep_poly_via_series(lam))
        checks.append((f"sep-eq-4[{','.join(map(str, lam))}]", res.is_zero(), None))
    return checks


def _commute_on_inputs(n: int, pairs, weights) -> list:
    """[H_i, H_j] f = 0 for monomial-symmetric inputs f, applied sequentially."""
    hs = {i: hamiltonian(i, n) for i in range(1, n)}
    out = []
    for i, j in pairs:
        ok = True
        for w in weights:
            f = monomial_sym(w)
            if hs[i].apply(hs[j].apply(f)) != hs[j].apply(hs[i].apply(f)):
                ok = False
                break
        out.append((f"commute[n={n},H{i}H{j}]", ok, None))
    return out


def suite_commutativity(opt) -> list:
    h1, h2 = hamiltonian(1, 3), hamiltonian(2, 3)
    checks = [("commute[n=3,H1H2]", h1.compose(h2) == h2.compose(h1), None)]
    checks += _commute_on_inputs(
        4, ((1, 2), (1, 3), (2, 3)), ((0, 0, 0, 1), (0, 0, 1, 1))
    )
    ida, idb = quantum_alpha_identities()
    checks.append(("alpha-id[a]", ida, None))
    checks.append(("alpha-id[b]", idb, None))
    checks.append(("alpha-12", alpha_12_consistent(), None))
    checks.append(("weighted-shift", weighted_shift_identities(), None))
    checks.append(("starred-adjoint", starred_hamiltonians_match_adjoints(), None))
    checks.append(("cubic-split", cubic_split_check(), None))
    for lam in ((0, 0, 0), (0, 1, 2), (-1, 0, 2), (1, 2, 3)):
        name = f"cn[{','.join(map(str, lam))}]"
        checks.append((name, cn_identity(lam), None))
    return checks


def suite_classical(opt) -> list:
    checks = [
        ("commute-cl", hamiltonians_commute(), None),
        ("lax-charpoly", lax_charpoly_identity_check(), None),
        ("alpha-reduction", alpha_reduction_check(), None),
        ("alpha-ids-cl", verify_alpha_identities_classical(), None),
        ("z-split", z_split_check(), None),
        ("sep-constraint", separation_constraint_check(), None),
    ]
    for k in range(20):
        p = random_phase_point(random.Random(1000 + k))
        y1, y2, by1, by2 = separate_numeric(p)
        prod = y1 * y2 * p.ell**3 * p.t[2] ** 2 / (p.t[0] * p.t[1])
        res = abs(prod - 1.0)
        for yj, byj in ((y1, by1), (y2, by2)):
            res = max(res, char_eq_residual(p, byj, yj), lax_det_residual(p, byj, yj))
        checks.append((f"point[{k}]", res < 1e-9, res))
    for seed in (0, 1, 2):
        p = real_slice_point(seed)
        coarse = genfunc_canonicity_check(p, 1e-4)
        fine = genfunc_canonicity_check(p, 5e-5)
        ratio = coarse / fine if fine else 4.0
        ok = fine < 1e-6 and 3.2 <= ratio <= 4.8
        checks.append((f"genfunc[{seed}]", ok, fine))
    return checks


def suite_appendix_a(opt) -> list:
    checks = []
    for nu, degree in ((0, 2), (1, 3), (2, 4), (3, 3)):
        checks.append((f"pq-lemma[{nu},{degree}]", pq_lemma_check(nu, degree), None))
    checks.append(("andrews[p=2]", andrews_identity_check((1, 2), 2), None))
    checks.append(("andrews[p=3]", andrews_identity_check((1, 1, 2), 3), None))
    for m in (1, 2, 3):
        checks.append((f"vwp[{m}]", vwp_sum_check(m), None))
    coarse = asympt_dilog_check(0.4, 1e-3)
    fine = asympt_dilog_check(0.4, 5e-4)
    checks.append(("asympt-dilog", fine < 0.6 * coarse and coarse < 1e-2, fine))
    return checks


def suite_appendix_b(opt) -> list:
    checks = []
    for idx in ((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 1, 0), (1, 1, 1, 1)):
        name = f"kernel-shift[{','.join(map(str, idx))}]"
        checks.append((name, kernel_shift_identity(*idx), None))
    for nu in range(4):
        checks.append((f"mab-pm[{nu}]", mab_pm_specialization(nu), None))
    for m in (1, 2, 3):
        checks.append((f"xik-sum[{m}]", xik_sum_identity(m), None))
    for m in (1, 2, 3):
        for nu in (0, 1, 2):
            checks.append((f"act-mab-pm[{m},{nu}]", act_mab_pm_concrete(m, nu), None))
    checks.append(("mab-inversion", mab_inversion_bookkeeping(), None))
    for g in (1, 2):
        checks.append((f"xi-sum[g={g}]", xi_sum_to_one(g), None))
        checks.append((f"xi-nonzero[g={g}]", xi_zero_term_nonzero(g), None))
    samples = [
        ("p[0,0,1]", p_basis_poly(0, 0, 1, "y")),
        ("p[1,1,0]", p_basis_poly(1, 1, 0, "y")),
        ("p[2,1,1]", p_basis_poly(2, 1, 1, "y")),
        ("MP[0,0,1]", factorized_image((0, 0, 1))),
        ("MP[0,1,2]", factorized_image((0, 1, 2))),
    ]
    for g in (1, 2):
        for label, phi in samples:
            name = f"minv-qdiff[g={g},{label}]"
            checks.append((name, minv_qdiff_matches_algebraic(phi, g), None))
    return checks


def suite_numeric(opt) -> list:
    q, g, n = opt.q, opt.g, opt.grid
    checks = []
    # trapezoid error decays like max|param|^nodes, so near-circle parameter
    # sets carry their own minimum node count
    aw_sets = (
        ((0.3 + 0.4j, -0.25, 0.5, -0.1 - 0.2j), 256),
        ((0.95, -0.9, 0.3, 0.2), 1024),
        ((0.0, 0.0, 0.0, 0.0), 256),
        ((0.5j, -0.5j, 0.7, -0.2), 256),
        ((0.6 + 0.3j, 0.6 - 0.3j, -0.4, 0.25), 256),
        ((0.85, -0.2 + 0.6j, -0.2 - 0.6j, 0.1), 512),
    )
    for k, (params, nmin) in enumerate(aw_sets):
        res = aw_integral_check(*params, q, n=max(n, nmin))
        checks.append((f"aw[{k}]", res < 1e-10, res))
    r, s = cmath.exp(0.3j), cmath.exp(1.1j)
    for nu in range(4):
        res = mab_numeric_check(0.7, 1.3, r, s, nu, q, n=max(n, 512))
        checks.append((f"mab[nu={nu}]", res < 1e-9, res))
    res = mab_rpoly_check(0.7, 1.3, r, s, (1, 0, 1, 0), q, n=max(n, 512))
    checks.append(("mab-rpoly[1,0,1,0]", res < 1e-9, res))
    pairs = (((0, 0, 1), (0, 1, 1)), ((0, 0, 2), (0, 1, 1)), ((0, 1, 2), (0, 0, 3)))
    for lam1, lam2 in pairs:
        res = orthogonality_check(lam1, lam2, g, q)
        name = "orth[{};{}]".format(
            ",".join(map(str, lam1)), ",".join(map(str, lam2))
        )
        checks.append((name, res < 1e-8, res))
    for lam in ((0, 0, 0), (0, 0, 1), (0, 1, 2), (-1, 0, 2)):
        res = qint_sep_poly_check(lam, q=q, g=g)
        checks.append((f"qint[{','.join(map(str, lam))}]", res < 1e-8, res))
    return checks


SUITE_RUNNERS = {
    "tables": suite_tables,
    "factorization": suite_factorization,
    "separated-eq": suite_separated_eq,
    "commutativity": suite_commutativity,
    "classical": suite_classical,
    "appendix-a": suite_appendix_a,
    "appendix-b": suite_appendix_b,
    "numeric": suite_numeric,
}


def cmd_verify(opt) -> int:
    checks = SUITE_RUNNERS[opt.suite](opt)
    passed = sum(1 for _, ok, _ in checks if ok)
    status = "pass" if passed == len(checks) else "fail"
    if opt.json:
        payload = {
            "suite": opt.suite,
            "checks": [
                {"name": name, "status": "pass" if ok else "fail"}
                | ({"residual": res} if res is not None else {})
                for name, ok, res in checks
            ],
            "passed": passed,
            "total": len(checks),
        }
        residuals = {name: res for name, ok, res in checks if res is not None}
        inputs = {
            "suite": opt.suite,
            "min": opt.min,
            "max": opt.max,
            "q": opt.q,
            "g": opt.g,
            "grid": opt.grid,
        }
        print(json.dumps(_document("verify", inputs, status, payload, residuals), indent=2))
    else:
        for name, ok, res in checks:
            tag = "PASS" if ok else "FAIL"
            tail = f"  residual={_fmt_residual(res)}" if res is not None else ""
            print(f"{tag}  {name}{tail}")
        print(f"{opt.suite}: {passed}/{len(checks)} checks passed")
    return 0 if status == "pass" else 1


# -- argument parsing ---------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsov",
        description="Separation of variables for the three-particle trigonometric "
        "Ruijsenaars model: Macdonald polynomials, separated polynomials, the "
        "separating operator, and verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("macdonald", "Macdonald polynomial in the monomial-symmetric basis"),
        ("seppoly", "separated polynomial S(y)"),
        ("c", "normalization constant of the factorized image"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--weight", required=True, help="comma-separated nondecreasing integers")
        if name == "seppoly":
            p.add_argument("--n", type=int, default=None, help="number of particles (defaults to the weight length)")
        p.add_argument("--json", action="store_true", help="structured output")

    p = sub.add_parser("apply-m", help="apply the separating operator to an expression")
    p.add_argument("expression", help="sum of monomials in t1, t2, t3 with coefficients in q, l")
    p.add_argument("--json", action="store_true", help="structured output")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--min", type=int, default=-2, help="sweep lower bound on weight parts")
    p.add_argument("--max", type=int, default=3, help="sweep upper bound on weight parts")
    p.add_argument("--q", type=float, default=0.5, help="numeric base, 0 < q < 1")
    p.add_argument("--g", type=float, default=1.0, help="numeric coupling")
    p.add_argument("--grid", type=int, default=256, help="quadrature nodes (power of two)")
    p.add_argument("--json", action="store_true", help="structured output")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    opt = parser.parse_args(argv)
    try:
        if opt.command == "macdonald":
            return cmd_macdonald(_parse_weight(opt.weight), opt.json)
        if opt.command == "seppoly":
            weight = _parse_weight(opt.weight)
            if opt.n is not None and opt.n != len(weight):
                raise ValueError(f"--n {opt.n} does not match the weight length {len(weight)}")
            return cmd_seppoly(weight, opt.json)
        if opt.command == "c":
            return cmd_c(_parse_weight(opt.weight), opt.json)
        if opt.command == "apply-m":
            return cmd_apply_m(opt.expression, opt.json)
        return cmd_verify(opt)
    except ValueError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
