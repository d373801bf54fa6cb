"""Release acceptance gate.

Every test here certifies one headline guarantee at its pinned tolerance and
prints a single ``[acceptance] PASS/FAIL <name>`` line. Oracle values are
computed independently of the library (direct formulas, exhaustive
enumeration, brute-force re-ranking) or were frozen from an out-of-band
numerical integration, so a regression in the implementation cannot silently
re-derive its own expected values.
"""

import functools
import hashlib
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from layerstack import (
    CrowdPrediction,
    Document,
    EntropicState,
    EventSpace,
    Frame,
    JointDistribution,
    MassFunction,
    TokenDistribution,
    aggregate_corpus,
    belief,
    combine,
    correlate_document,
    correlation_p_value,
    crowd_decomposition,
    entropic_gain,
    hartley_entropy,
    justification_score,
    make_mass,
    pearson_r,
    plausibility,
    rank_documents,
    residual_entropy,
    shannon_entropy,
    synthetic_corpus,
    vacuous_mass,
    write_corpus,
)
from layerstack.cli import main as cli_main
from layerstack.corpus import Corpus

from helpers import make_corpus, run_cli

# Two-sided p-value for r=0.6 over n=20 points, frozen from numerically
# integrating the Student t density with 18 degrees of freedom over
# |t| >= 0.6*sqrt(18/(1-0.36)) (adaptive quadrature, abs err < 1e-12).
P_VALUE_R06_N20 = 0.0051629256736767945

TABLE_HEADER = "title\tcorrelation\tp_value"


def criterion(name):
    """Print one acceptance line per criterion, pass or fail."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                value = fn(*args, **kwargs)
            except BaseException:
                print(f"\n[acceptance] FAIL {name}", flush=True)
                raise
            print(f"\n[acceptance] PASS {name}", flush=True)
            return value

        return wrapper

    return decorate


@criterion("entropy-suite")
def test_entropy_suite():
    started = time.perf_counter()

    assert hartley_entropy(1) == 0.0
    for m in range(1, 1025):
        uniform = TokenDistribution.uniform(m)
        assert abs(hartley_entropy(m) - shannon_entropy(uniform)) <= 1e-12

    rng = np.random.default_rng(2024)
    for _ in range(1000):
        nt, nr = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        weights = rng.random((nt, nr)) + 1e-9
        probs = weights / weights.sum()
        joint = JointDistribution(
            {(i, j): float(probs[i, j]) for i in range(nt) for j in range(nr)}
        )
        actual = residual_entropy(joint)
        # independent conditional-expansion oracle: sum_t p(t) * H(R | T=t)
        expansion = 0.0
        for i in range(nt):
            pt = float(probs[i].sum())
            expansion += pt * math.fsum((p / pt) * math.log2(pt / p) for p in probs[i])
        assert abs(actual - expansion) <= 1e-9
        assert actual >= -1e-9

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"entropy suite took {elapsed:.2f}s (budget 1s)"


@criterion("crowd-identity")
def test_crowd_identity():
    started = time.perf_counter()
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        n = int(rng.integers(1, 10_001))
        xs = rng.uniform(-1e6, 1e6, size=n)
        truth = float(rng.uniform(-1e6, 1e6))
        d = crowd_decomposition(CrowdPrediction(xs, truth))
        assert math.isclose(
            d.crowd_sq_error + d.diversity,
            d.avg_individual_sq_error,
            rel_tol=1e-9,
            abs_tol=1e-9,
        )
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"crowd identity took {elapsed:.2f}s (budget 5s)"


def _random_mass(frame: Frame, rng: np.random.Generator) -> MassFunction:
    """A random mass function that always keeps some weight on the full
    frame, so random pairs can never be totally conflicting."""
    full = frame.full_mask
    population = range(1, full + 1)
    count = int(rng.integers(1, min(full, 9) + 1))
    masks = rng.choice(population, size=count, replace=False) if full > 1 else [1]
    weights = rng.random(len(masks)) + 0.05
    assignments = [(int(mask), float(w)) for mask, w in zip(masks, weights)]
    assignments.append((full, float(rng.random() + 0.1)))
    total = math.fsum(w for _, w in assignments)
    return make_mass(frame, [(mask, w / total) for mask, w in assignments])


def _combine_oracle(m1: MassFunction, m2: MassFunction) -> dict[int, float]:
    """Plain product enumeration of Dempster's rule, accumulated naively."""
    numerators: dict[int, float] = {}
    conflict = 0.0
    for a, va in m1.masses.items():
        for b, vb in m2.masses.items():
            inter = a & b
            if inter == 0:
                conflict += va * vb
            else:
                numerators[inter] = numerators.get(inter, 0.0) + va * vb
    return {mask: v / (1.0 - conflict) for mask, v in numerators.items()}


@criterion("dst-suite")
def test_dst_suite():
    started = time.perf_counter()
    rng = np.random.default_rng(7)
    frames = {n: Frame(tuple(f"e{i}" for i in range(n))) for n in range(1, 7)}
    masses = []
    for _ in range(1000):
        frame = frames[int(rng.integers(1, 7))]
        masses.append(_random_mass(frame, rng))

    for m in masses:
        frame = m.frame
        full = frame.full_mask
        bel = [belief(m, a) for a in range(full + 1)]
        # duality against the complement, every subset exhaustively
        for a in range(full + 1):
            assert abs(plausibility(m, a) - (1.0 - bel[full & ~a])) <= 1e-12
        # monotone: adding any one element never lowers belief
        for a in range(full + 1):
            for i in range(len(frame)):
                grown = a | (1 << i)
                if grown != a:
                    assert bel[a] <= bel[grown] + 1e-12
        # combining with total ignorance changes nothing, bit for bit
        assert combine(m, vacuous_mass(frame)).masses == m.masses

    by_frame: dict[int, list[MassFunction]] = {}
    for m in masses:
        by_frame.setdefault(len(m.frame), []).append(m)
    pairs = []
    triples = []
    for group in by_frame.values():
        pairs += [(group[i], group[i + 1]) for i in range(0, len(group) - 1, 2)]
        triples += [
            (group[i], group[i + 1], group[i + 2]) for i in range(0, len(group) - 2, 3)
        ]

    for m1, m2 in pairs:
        ab = combine(m1, m2).masses
        ba = combine(m2, m1).masses
        oracle = _combine_oracle(m1, m2)
        assert ab.keys() == ba.keys() == oracle.keys()
        for key in ab:
            assert abs(ab[key] - ba[key]) <= 1e-9
            assert abs(ab[key] - oracle[key]) <= 1e-9
    for m1, m2, m3 in triples:
        left = combine(combine(m1, m2), m3).masses
        right = combine(m1, combine(m2, m3)).masses
        assert left.keys() == right.keys()
        for key in left:
            assert abs(left[key] - right[key]) <= 1e-9

    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"DST suite took {elapsed:.2f}s (budget 10s)"


@criterion("correlation-suite")
def test_correlation_suite():
    rng = np.random.default_rng(31)
    for _ in range(1000):
        n = int(rng.integers(3, 51))
        xs = rng.uniform(-10, 10, size=n)
        ys = rng.uniform(-10, 10, size=n)
        # direct-formula oracle on compensated sums
        mx = math.fsum(xs) / n
        my = math.fsum(ys) / n
        sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
        sxx = math.fsum((x - mx) ** 2 for x in xs)
        syy = math.fsum((y - my) ** 2 for y in ys)
        expected = sxy / math.sqrt(sxx * syy)
        assert abs(pearson_r(xs, ys) - expected) <= 1e-12

    p = correlation_p_value(0.6, 20)
    assert abs(p - P_VALUE_R06_N20) <= 5e-5
    assert abs(p - 0.00517) <= 5e-5

    # a document whose counts equal the pooled rest of the corpus
    corpus = make_corpus(
        {
            "whole": {"u": 3, "v": 6, "w": 9, "x": 12},
            "half1": {"u": 2, "v": 3, "w": 5, "x": 2},
            "half2": {"u": 1, "v": 3, "w": 4, "x": 10},
        }
    )
    assert abs(correlate_document(corpus.get("whole"), corpus).r - 1.0) <= 1e-9
    for _ in range(50):
        profile = rng.uniform(0.1, 10.0, size=int(rng.integers(3, 30)))
        assert abs(pearson_r(profile, profile.copy()) - 1.0) <= 1e-9


def _oracle_loo_ranking(corpus: Corpus) -> list[tuple[str, float]]:
    """Brute-force leave-one-out log10-proportion correlations for every
    document, sorted the way the ranking must sort (r desc, id asc)."""
    totals: dict[str, int] = {}
    doc_totals: dict[str, int] = {}
    for doc in corpus:
        doc_totals[doc.id] = sum(doc.token_counts.values())
        for term, count in doc.token_counts.items():
            totals[term] = totals.get(term, 0) + count
    grand = sum(doc_totals.values())
    scored = []
    for doc in corpus:
        rest_total = grand - doc_totals[doc.id]
        shared, xs, ys = [], [], []
        for term in sorted(doc.token_counts):
            count = doc.token_counts[term]
            rest = totals[term] - count
            if count > 0 and rest > 0:
                shared.append(term)
                xs.append(math.log10(count / doc_totals[doc.id]))
                ys.append(math.log10(rest / rest_total))
        if len(shared) < 3:
            continue
        scored.append((doc.id, float(np.corrcoef(xs, ys)[0, 1])))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored


def _assert_table_format(lines: list[str], expected_rows: int):
    assert lines[0] == TABLE_HEADER
    assert len(lines) == expected_rows + 1
    for line in lines[1:]:
        title, corr, p_text = line.split("\t")
        assert title
        assert len(corr.split(".")[1]) == 3  # three decimals
        mantissa, exponent = p_text.split("e")
        assert len(mantissa.split(".")[1]) == 2  # three significant digits
        int(exponent)


@criterion("table-shape")
def test_table_shape_reproduction(tmp_path):
    # --- 36 documents, majority topic 0, plain ranking -------------------
    started = time.perf_counter()
    corpus, topic_of = synthetic_corpus((18, 12, 6), seed=0)
    ranked = rank_documents(corpus, top_k=5)
    assert len(ranked) == 5
    assert all(topic_of[res.doc_id] == 0 for res in ranked)

    oracle = _oracle_loo_ranking(corpus)
    assert [res.doc_id for res in ranked] == [doc_id for doc_id, _ in oracle[:5]]
    for res, (_, oracle_r) in zip(ranked, oracle):
        assert abs(res.r - oracle_r) <= 1e-10

    source = write_corpus(corpus, tmp_path / "table1", manifest=True)
    code, out, _ = run_cli(cli_main, ["rank", str(source), "--top", "5"])
    assert code == 0
    lines = out.splitlines()
    _assert_table_format(lines, expected_rows=5)
    assert all(line.split("\t")[0].endswith("(topic 0)") for line in lines[1:])
    elapsed_small = time.perf_counter() - started
    assert elapsed_small < 10.0, f"36-doc table took {elapsed_small:.2f}s (budget 10s)"

    # --- 324 documents, 9 clusters, one aggregation round ----------------
    started = time.perf_counter()
    corpus, topic_of = synthetic_corpus((270, 36, 18), seed=0)
    agg = aggregate_corpus(corpus, k=9, rounds=1, per_cluster=5, seed=42)
    top5 = agg.ranking[:5]
    assert len(top5) == 5
    assert all(topic_of[res.doc_id] == 0 for res in top5)
    assert len(agg.survivor_ids) <= 45

    # brute-force the per-cluster reselection of the single round
    (round0,) = agg.rounds
    for cluster_index in range(round0.clustering.k):
        members = round0.clustering.members(cluster_index)
        expected = [
            doc_id
            for doc_id, _ in _oracle_loo_ranking(corpus.subset(members))[:5]
        ]
        actual = [res.doc_id for res in round0.cluster_rankings[cluster_index]]
        assert actual == expected

    # brute-force the final ranking over the survivors
    oracle = _oracle_loo_ranking(corpus.subset(agg.survivor_ids))
    assert [res.doc_id for res in agg.ranking] == [doc_id for doc_id, _ in oracle]
    for res, (_, oracle_r) in zip(agg.ranking, oracle):
        assert abs(res.r - oracle_r) <= 1e-10

    source = write_corpus(corpus, tmp_path / "table2", manifest=True)
    code, out, _ = run_cli(
        cli_main,
        ["aggregate", str(source), "--k", "9", "--rounds", "1",
         "--per-cluster", "5", "--seed", "42", "--top", "5"],
    )
    assert code == 0
    lines = out.splitlines()
    _assert_table_format(lines, expected_rows=5)
    assert all(line.split("\t")[0].endswith("(topic 0)") for line in lines[1:])
    elapsed_large = time.perf_counter() - started
    assert elapsed_large < 60.0, f"324-doc table took {elapsed_large:.2f}s (budget 60s)"


@criterion("entropic-gain")
def test_entropic_gain_properties():
    candidate = Document(id="c", title="c", token_counts={"c": 2}, total_tokens=2)
    for strength in (0.5, 1.0, 2.0, 3.75):
        state = EntropicState(macrostate={"a": 1, "b": 1}, reservoir_strength=strength)
        assert abs(entropic_gain(state, candidate) - 0.5 * strength) <= 1e-12

    rng = np.random.default_rng(17)
    for _ in range(20):
        terms = [f"t{i}" for i in range(int(rng.integers(2, 8)))]
        macro = {t: int(rng.integers(1, 50)) for t in terms}
        cand_counts = {t: int(c) for t, c in zip(terms, rng.integers(0, 30, len(terms)))}
        cand_counts[terms[0]] += 1  # keep the candidate non-empty
        cand = Document(
            id="cand",
            title="cand",
            token_counts=cand_counts,
            total_tokens=sum(cand_counts.values()),
        )
        base = entropic_gain(EntropicState(macrostate=macro, reservoir_strength=1.0), cand)
        for scale in (0.25, 0.5, 2.0, 8.0):
            scaled = entropic_gain(
                EntropicState(macrostate=macro, reservoir_strength=scale), cand
            )
            assert abs(scaled - scale * base) <= 1e-12

    for macro, cand_counts in (
        ({"a": 2, "b": 2}, {"a": 1, "b": 1}),
        ({"a": 3, "b": 1}, {"a": 6, "b": 2}),
        ({"a": 1, "b": 2}, {"a": 1, "b": 2}),
        ({"a": 5, "b": 10, "c": 5}, {"a": 1, "b": 2, "c": 1}),
    ):
        state = EntropicState(macrostate=macro, reservoir_strength=2.5)
        cand = Document(
            id="same",
            title="same",
            token_counts=cand_counts,
            total_tokens=sum(cand_counts.values()),
        )
        assert abs(entropic_gain(state, cand)) <= 1e-12


def _tree_hashes(root) -> dict[str, str]:
    return {
        str(path.relative_to(root)): hashlib.sha256(path.read_bytes()).hexdigest()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


@criterion("determinism")
def test_full_run_determinism(tmp_path):
    corpus, _ = synthetic_corpus((6, 4, 2), seed=3, length_range=(80, 120))
    source = write_corpus(corpus, tmp_path / "corpus", manifest=True)
    out_dir = tmp_path / "out"
    argv = [
        sys.executable, "-m", "layerstack", "run", str(source),
        "--out", str(out_dir), "--k", "3", "--seed", "42", "--force-bit-layer",
    ]

    first = subprocess.run(argv, capture_output=True, text=True)
    assert first.returncode == 0, first.stderr
    before = _tree_hashes(out_dir)
    assert before, "first run produced no files"

    second = subprocess.run(argv, capture_output=True, text=True)
    assert second.returncode == 0, second.stderr
    after = _tree_hashes(out_dir)

    assert before == after
    assert first.stdout == second.stdout


@criterion("justification-oracle")
def test_justification_oracle():
    rng = np.random.default_rng(61)
    for _ in range(500):
        n = int(rng.integers(1, 9))
        raw = rng.random(n) + 0.1
        total = math.fsum(raw)
        weights = {i: float(w / total) for i, w in enumerate(raw)}
        pivot = int(rng.integers(n))
        k = int(rng.integers(1, 4))
        testimonies = []
        for _ in range(k):
            picks = {i for i in range(n) if rng.random() < 0.5}
            picks.add(pivot)
            testimonies.append(frozenset(picks))
        belief_event = frozenset(i for i in range(n) if rng.random() < 0.5)
        space = EventSpace(
            weights=weights,
            belief_event=belief_event,
            testimonies=tuple(testimonies),
        )

        # independent plain-sum enumeration of every probability in the score
        def prob(event):
            return sum(weights[o] for o in event)

        t1 = testimonies[0]
        p_t1 = prob(t1)
        if k == 1:
            conditional = p_t1
        else:
            rest = frozenset.intersection(*testimonies[1:])
            conditional = prob(t1 & rest) / prob(rest)
        joint = belief_event
        for t in testimonies:
            joint = joint & t
        expected = prob(joint) / (p_t1 * conditional)

        assert abs(justification_score(space) - expected) <= 1e-12
