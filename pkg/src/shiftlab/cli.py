"""Command-line front door: config-driven, seeded, replayable runs.

Exit codes: 0 success, 1 certificate failure (an asserted inequality did
not verify), 2 usage/config error, 3 enumeration budget exhausted.  Every
run writes run_record.json; the timestamp lives only there.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from shiftlab import jsonio
from shiftlab.codebook import CodebookSpec, build_codebook, verify_codebook, write_codebook
from shiftlab.complexity import (
    ConcatSubshift,
    EnumerationBudgetExceeded,
    complexity_table,
    write_complexity_csv,
)
from shiftlab.measures import (
    covering_number,
    empirical_measure,
    quiet_bound_check,
    sample_point,
    slow_entropy_report,
)
from shiftlab.seqs import growth_report, liouville, load_sequence, mobius, save_sequence
from shiftlab.targets import target_from_config
from shiftlab.thm1 import (
    LevelFamily,
    StepParams,
    Thm1Params,
    auto_params,
    build_levels,
    complexity_certificate,
    frequency_lower_bound,
    verify_containment,
    verify_distinct_subwords,
)
from shiftlab.thm2 import all_parameter_checks_pass, build_ledger, ledger_to_json
from shiftlab.words import Alphabet, Word

COMMANDS = (
    "thm1-build",
    "thm1-verify",
    "thm2-ledger",
    "thm2-build",
    "codebook",
    "complexity",
    "cover",
    "quiet-check",
    "liouville",
    "report",
)

EXIT_OK = 0
EXIT_CERT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class ConfigError(ValueError):
    pass


def _frac(x) -> Fraction:
    return jsonio.parse_fraction(x)


def _thm1_ledger_payload(params: Thm1Params, families: list[LevelFamily]) -> dict:
    levels = []
    for idx, fam in enumerate(families):
        cert_d = verify_distinct_subwords(fam)
        entry = {
            "level": fam.level,
            "word_count": len(fam.words),
            "word_length": fam.word_length,
            "n_k": fam.n_k,
            "distinct_subwords": cert_d.positive,
            "pairs_checked": len(cert_d.pairs),
        }
        if idx > 0:
            step = params.steps[idx - 1]
            prev = families[idx - 1]
            entry["step"] = {"N": step.N, "S": step.S, "delta": step.delta}
            entry["contains_previous_level"] = verify_containment(prev, fam)
            entry["frequency_lower_bound"] = frequency_lower_bound(prev, step)
            ccert = complexity_certificate(fam, step, prev.word_length)
            entry["complexity"] = {
                "exact": ccert.exact,
                "three_term": ccert.three_term,
                "headline": ccert.headline,
                "ordered_junction_bound": ccert.ordered_junction_bound,
                "exact_le_three_term": ccert.exact_le_three_term,
                "exact_le_headline": ccert.exact_le_headline,
                "exact_le_ordered": ccert.exact_le_ordered,
                "note": ccert.note,
            }
            if params.target is not None and ccert.exact is not None:
                target_val = params.target(fam.n_k)
                entry["liminf_checkpoint"] = {
                    "p_exact": ccert.exact,
                    "target": target_val,
                    "ratio": Fraction(ccert.exact, target_val),
                    "below_1_over_k": Fraction(ccert.exact, target_val) < Fraction(1, fam.level),
                }
        else:
            ccert = complexity_certificate(fam)
            entry["complexity"] = {
                "exact": ccert.exact,
                "claimed_step1": ccert.claimed_step1,
                "matches_claimed": None
                if ccert.claimed_step1 is None or ccert.exact is None
                else ccert.exact == ccert.claimed_step1,
            }
        levels.append(entry)
    return {
        "base_n": params.base_n,
        "balanced_variant": params.balanced_variant,
        "steps": [{"N": s.N, "S": s.S, "delta": s.delta} for s in params.steps],
        "M_thresholds": list(params.M_thresholds),
        "horizon": params.horizon,
        "delta_product_lower": params.delta_product_lower,
        "target": params.target.describe() if params.target else None,
        "levels": levels,
    }


def _thm1_certificates_ok(payload: dict) -> bool:
    for entry in payload["levels"]:
        if not entry["distinct_subwords"]:
            return False
        if "contains_previous_level" in entry and not entry["contains_previous_level"]:
            return False
        chk = entry.get("liminf_checkpoint")
        if chk is not None and not chk["below_1_over_k"]:
            return False
    return True


def cmd_thm1_build(cfg: dict, out: Path, seed: int) -> int:
    target = target_from_config(cfg.get("target", "square"))
    k_max = int(cfg.get("k_max", 2))
    deltas = [_frac(d) for d in cfg["deltas"]] if "deltas" in cfg else None
    params = auto_params(target, k_max, deltas, horizon=int(cfg.get("horizon", 100_000)))
    if cfg.get("balanced_variant"):
        params = Thm1Params(
            base_n=params.base_n,
            steps=params.steps,
            balanced_variant=True,
            target=params.target,
            M_thresholds=params.M_thresholds,
            horizon=params.horizon,
            delta_product_lower=params.delta_product_lower,
        )
    families = build_levels(params)
    payload = _thm1_ledger_payload(params, families)
    jsonio.write(out / "ledger.json", payload)
    for fam in families:
        with open(out / f"level{fam.level}_words.txt", "w", encoding="ascii", newline="\n") as fh:
            for w in fam.words:
                fh.write(w.text() + "\n")
    return EXIT_OK if _thm1_certificates_ok(payload) else EXIT_CERT


def cmd_thm1_verify(cfg: dict, out: Path, seed: int) -> int:
    src = Path(cfg.get("ledger", out / "ledger.json"))
    payload = jsonio.read(src)
    params = Thm1Params(
        base_n=payload["base_n"],
        steps=tuple(
            StepParams(N=s["N"], S=s["S"], delta=_frac(s["delta"])) for s in payload["steps"]
        ),
        balanced_variant=payload.get("balanced_variant", False),
        target=target_from_config(payload["target"]) if payload.get("target") else None,
    )
    families = build_levels(params)
    fresh = _thm1_ledger_payload(params, families)
    ok = _thm1_certificates_ok(fresh)
    # word files must replay bit-identically
    for fam in families:
        stored = Path(src).parent / f"level{fam.level}_words.txt"
        if stored.exists():
            lines = stored.read_text(encoding="ascii").splitlines()
            if lines != [w.text() for w in fam.words]:
                ok = False
    jsonio.write(out / "verify.json", {"source": str(src), "certificates_pass": ok})
    return EXIT_OK if ok else EXIT_CERT


def _cmd_thm2(cfg: dict, out: Path, seed: int, materialize: bool) -> int:
    a = target_from_config(cfg.get("a", "log2p1"))
    b = target_from_config(cfg.get("b", "square"))
    levels = int(cfg.get("levels", 2))
    cap = int(cfg.get("sample_cap", 48)) if materialize else 0
    ledger = build_ledger(a, b, levels=levels, seed=seed, sample_cap=cap)
    payload = ledger_to_json(ledger)
    jsonio.write(out / "ledger.json", payload)
    if materialize:
        for rec in ledger.levels:
            if rec.words:
                path = out / f"level{rec.level}_words.txt"
                with open(path, "w", encoding="ascii", newline="\n") as fh:
                    for w in rec.words:
                        fh.write(w.text() + "\n")
    ok, failures = all_parameter_checks_pass(ledger)
    jsonio.write(out / "checks.json", {"pass": ok, "failures": failures})
    return EXIT_OK if ok else EXIT_CERT


def cmd_thm2_ledger(cfg: dict, out: Path, seed: int) -> int:
    return _cmd_thm2(cfg, out, seed, materialize=False)


def cmd_thm2_build(cfg: dict, out: Path, seed: int) -> int:
    return _cmd_thm2(cfg, out, seed, materialize=True)


def cmd_codebook(cfg: dict, out: Path, seed: int) -> int:
    spec = CodebookSpec(
        N=int(cfg.get("N", 2)),
        n=int(cfg.get("n", 16)),
        alpha=_frac(cfg.get("alpha", "1/4")),
        eps=_frac(cfg.get("eps", "1/2")),
    )
    result = build_codebook(
        spec,
        seed=seed,
        mode=cfg.get("mode", "auto"),
        target_size=cfg.get("target_size"),
        max_candidates=int(cfg.get("max_candidates", 500_000)),
    )
    write_codebook(out / "codebook.txt", result)
    violations = verify_codebook(result.words, spec)
    jsonio.write(
        out / "codebook_check.json",
        {
            "size": result.size,
            "partial": result.partial,
            "violations": violations,
            "mode": result.mode,
        },
    )
    return EXIT_OK if not violations else EXIT_CERT


def _generators_from_config(cfg: dict) -> ConcatSubshift:
    gens = cfg.get("generators")
    if not gens:
        raise ConfigError("complexity needs a 'generators' list of word strings")
    words = [Word.from_text(g) for g in gens]
    ab = Alphabet(max(w.alphabet.size for w in words))
    words = [Word(w.data, ab) for w in words]
    return ConcatSubshift(tuple(words))


def cmd_complexity(cfg: dict, out: Path, seed: int) -> int:
    X = _generators_from_config(cfg)
    ns = [int(n) for n in cfg.get("ns", [1, 2, 3, 4, 5])]
    budget = int(cfg.get("budget", 10**8))
    rows = complexity_table(X, ns, budget=budget)
    write_complexity_csv(out / "complexity.csv", rows)
    return EXIT_OK


def cmd_cover(cfg: dict, out: Path, seed: int) -> int:
    universe = [Word.from_text(w) for w in cfg["universe"]]
    ab = Alphabet(max(w.alphabet.size for w in universe))
    universe = [Word(w.data, ab) for w in universe]
    sample = Word.from_text(cfg["sample"], ab)
    n = len(universe[0])
    m = empirical_measure(sample, n)
    rows = []
    for eps_text in cfg.get("eps", ["3/10"]):
        eps = _frac(eps_text)
        res = covering_number(m, eps, universe, method=cfg.get("method", "exact"))
        rows.append(
            {
                "eps": eps,
                "K": len(res.centers),
                "covered_mass": res.covered_mass,
                "centers": [c.text() for c in res.centers],
                "method": res.method,
            }
        )
    jsonio.write(out / "cover.json", {"results": rows})
    return EXIT_OK


def cmd_quiet_check(cfg: dict, out: Path, seed: int) -> int:
    base = [Word.from_text(w) for w in cfg["base_words"]]
    ab = Alphabet(max(w.alphabet.size for w in base))
    base = [Word(w.data, ab) for w in base]
    reps = int(cfg.get("word_reps", 20))
    M = int(cfg.get("M", 50))
    length = int(cfg.get("length", 1_000_000))
    ws = [w.times(reps) for w in base]
    N = len(ws[0])
    P = int(cfg.get("P", 2 * N))
    vs = [w.times(M) for w in ws]
    X = ConcatSubshift(tuple(vs))
    x = sample_point(X, length, seed)
    meas = empirical_measure(x, P)
    slack = _frac(cfg["slack"]) if "slack" in cfg else None
    cert = quiet_bound_check(meas, vs, P, N, M, slack=slack)
    jsonio.write(out / "quiet.json", {"N": N, "M": M, "P": P, "length": length, **cert.to_json()})
    return EXIT_OK if cert.passed else EXIT_CERT


def cmd_liouville(cfg: dict, out: Path, seed: int) -> int:
    kind = cfg.get("kind", "liouville")
    n_max = int(cfg.get("n_max", 1_000_000))
    cache = cfg.get("cache")
    if cache and Path(cache).exists():
        seq = load_sequence(cache)
        if seq.kind != kind or seq.n_max < n_max:
            seq = liouville(n_max) if kind == "liouville" else mobius(n_max)
    else:
        seq = liouville(n_max) if kind == "liouville" else mobius(n_max)
    if cache:
        save_sequence(cache, seq)
    ns = [int(n) for n in cfg.get("ns", range(1, 17))]
    rows = growth_report(seq, ns)
    with open(out / "seq_complexity.csv", "w", encoding="ascii", newline="\n") as fh:
        fh.write("n,count,count_over_n,count_over_n2\n")
        for r in rows:
            fh.write(f"{r['n']},{r['count']},{r['count_over_n']},{r['count_over_n2']}\n")
    return EXIT_OK


def cmd_report(cfg: dict, out: Path, seed: int) -> int:
    a = target_from_config(cfg.get("a", "log2p1"))
    b = target_from_config(cfg.get("b", "square"))
    checkpoints = [(int(n), _frac(e), int(K)) for n, e, K in cfg.get("checkpoints", [])]
    rows = slow_entropy_report(checkpoints, a, b)
    jsonio.write(out / "report.json", {"rows": rows})
    return EXIT_OK


_DISPATCH = {
    "thm1-build": cmd_thm1_build,
    "thm1-verify": cmd_thm1_verify,
    "thm2-ledger": cmd_thm2_ledger,
    "thm2-build": cmd_thm2_build,
    "codebook": cmd_codebook,
    "complexity": cmd_complexity,
    "cover": cmd_cover,
    "quiet-check": cmd_quiet_check,
    "liouville": cmd_liouville,
    "report": cmd_report,
}


def run(command: str, config: dict, out_dir, seed: int = 0, threads: int = 1) -> int:
    """Programmatic entry point mirroring the CLI contract."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    record = {
        "command": command,
        "config": config,
        "seed": seed,
        "threads": threads,
        "version": "0.1.0",
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "status": "ok",
        "reason": "",
    }
    if command not in _DISPATCH:
        record["status"] = "usage-error"
        record["reason"] = f"unknown command {command!r}"
        jsonio.write(out / "run_record.json", record)
        return EXIT_USAGE
    try:
        code = _DISPATCH[command](config, out, seed)
    except EnumerationBudgetExceeded as exc:
        record["status"] = "budget-exhausted"
        record["reason"] = str(exc)
        jsonio.write(out / "run_record.json", record)
        return EXIT_BUDGET
    except (ConfigError, KeyError, ValueError, OSError) as exc:
        record["status"] = "config-error"
        record["reason"] = f"{type(exc).__name__}: {exc}"
        jsonio.write(out / "run_record.json", record)
        return EXIT_USAGE
    if code == EXIT_CERT:
        record["status"] = "certificate-failure"
        record["reason"] = "an asserted inequality failed to verify"
    jsonio.write(out / "run_record.json", record)
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="shiftlab", description="subshift construction and verification runs"
    )
    parser.add_argument("command", choices=COMMANDS + ("help",))
    parser.add_argument("--config", type=Path, default=None, help="JSON config file")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return EXIT_USAGE
    if args.command == "help":
        parser.print_help()
        return EXIT_OK
    config = {}
    if args.config is not None:
        try:
            config = jsonio.read(args.config)
        except (OSError, ValueError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return run(args.command, config, args.out, seed=args.seed, threads=max(1, args.threads))


if __name__ == "__main__":
    sys.exit(main())
