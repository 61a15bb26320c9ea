"""Ground probabilistic logic programs under the distribution semantics,
evaluated exactly by world enumeration, with an uncertainty-aware extension
where fact probabilities are beta-distributed.

Accepted clause forms (one per line, `%` comments):

    0.4::a.                 probabilistic fact
    beta(4,6)::a.           fact with a beta-distributed probability
    a.                      certain fact
    h :- b1, \\+ b2.         rule (stratified negation)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import (InconsistentEvidenceError, ProgramParseError, TooLargeError,
                     UnstratifiedProgramError)
from .kernels import beta_matrix
from .opinions import Opinion, moment_fit_flagged, opinion_from_mean_strength, S_MAX

_MAX_FACTS = 20

_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*(?:\(\s*[a-z0-9][A-Za-z0-9_]*(?:\s*,\s*[a-z0-9][A-Za-z0-9_]*)*\s*\))?")
_VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Literal:
    atom: str
    positive: bool = True


@dataclass(frozen=True)
class Rule:
    head: str
    body: tuple[Literal, ...]


@dataclass
class GroundProgram:
    # atom -> probability (float) or ("beta", a, b)
    facts: dict = field(default_factory=dict)
    rules: list[Rule] = field(default_factory=list)
    strata: dict = field(default_factory=dict)    # atom -> stratum level

    @property
    def fact_atoms(self) -> list[str]:
        return list(self.facts)

    @property
    def has_beta_facts(self) -> bool:
        return any(isinstance(p, tuple) for p in self.facts.values())

    def herbrand_base(self) -> set[str]:
        atoms = set(self.facts)
        for r in self.rules:
            atoms.add(r.head)
            atoms.update(lit.atom for lit in r.body)
        return atoms


@dataclass(frozen=True)
class Query:
    target: str
    evidence: tuple[tuple[str, bool], ...] = ()


def parse_program(text: str) -> GroundProgram:
    prog = GroundProgram()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0]
        if not line.strip():
            continue
        stripped = line.rstrip()
        if not stripped.endswith("."):
            raise ProgramParseError("clause must end with '.'", line_no, len(stripped))
        clause = stripped[:-1].strip()
        col = raw.index(clause[0]) + 1 if clause else 1
        if ":-" in clause:
            _parse_rule(prog, clause, line_no, col)
        else:
            _parse_fact(prog, clause, line_no, col)
    prog.strata = _stratify(prog)
    return prog


def _parse_atom(text: str, line: int, col: int) -> str:
    m = _ATOM_RE.fullmatch(text.strip())
    if not m:
        if _VAR_RE.search(text):
            raise ProgramParseError(f"non-ground term {text.strip()!r}", line, col)
        raise ProgramParseError(f"expected a ground atom, got {text.strip()!r}", line, col)
    return re.sub(r"\s+", "", m.group(0))


def _parse_fact(prog: GroundProgram, clause: str, line: int, col: int):
    if "::" in clause:
        param_text, atom_text = clause.split("::", 1)
        param_text = param_text.strip()
        beta_m = re.fullmatch(r"beta\(\s*([0-9.eE+-]+)\s*,\s*([0-9.eE+-]+)\s*\)", param_text)
        if beta_m:
            a, b = float(beta_m.group(1)), float(beta_m.group(2))
            if a <= 0 or b <= 0:
                raise ProgramParseError(f"beta parameters must be positive: {param_text}", line, col)
            param = ("beta", a, b)
        else:
            try:
                p = float(param_text)
            except ValueError:
                raise ProgramParseError(f"bad fact annotation {param_text!r}", line, col) from None
            if not 0.0 <= p <= 1.0:
                raise ProgramParseError(f"probability {p} outside [0, 1]", line, col)
            param = p
    else:
        atom_text, param = clause, 1.0
    atom = _parse_atom(atom_text, line, col)
    prog.facts[atom] = param


def _parse_rule(prog: GroundProgram, clause: str, line: int, col: int):
    head_text, body_text = clause.split(":-", 1)
    head = _parse_atom(head_text, line, col)
    body = []
    for part in _split_body(body_text):
        part = part.strip()
        positive = True
        if part.startswith("\\+"):
            positive = False
            part = part[2:].strip()
        body.append(Literal(_parse_atom(part, line, col), positive))
    prog.rules.append(Rule(head=head, body=tuple(body)))


def _split_body(text: str) -> list[str]:
    """Split on commas at parenthesis depth 0 only."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _stratify(prog: GroundProgram) -> dict:
    """Predicate-dependency condensation; negation inside an SCC is rejected."""
    g = nx.DiGraph()
    g.add_nodes_from(prog.herbrand_base())
    neg_edges = set()
    for r in prog.rules:
        for lit in r.body:
            g.add_edge(r.head, lit.atom)
            if not lit.positive:
                neg_edges.add((r.head, lit.atom))
    scc_of = {}
    sccs = list(nx.strongly_connected_components(g))
    for i, comp in enumerate(sccs):
        for atom in comp:
            scc_of[atom] = i
    for head, dep in neg_edges:
        if scc_of[head] == scc_of[dep]:
            comp = sccs[scc_of[head]]
            sub = g.subgraph(comp)
            cycle = nx.shortest_path(sub, dep, head)
            raise UnstratifiedProgramError(cycle)
    # stratum(head) >= stratum(pos dep), > stratum(neg dep); condensation
    # edges point head -> dependency, so walk components bottom-up
    cond = nx.condensation(g, sccs)
    level = {i: 0 for i in cond.nodes}
    for i in reversed(list(nx.topological_sort(cond))):
        for j in cond.successors(i):
            bump = 1 if any((h, d) in neg_edges
                            for h in cond.nodes[i]["members"]
                            for d in cond.nodes[j]["members"]) else 0
            level[i] = max(level[i], level[j] + bump)
    return {atom: level[scc_of[atom]] for atom in scc_of}


def least_model(prog: GroundProgram, world: set[str]) -> set[str]:
    """Stratified fixpoint: facts in the world plus heads of fired rules."""
    true = set(world)
    max_level = max(prog.strata.values(), default=0)
    for lvl in range(max_level + 1):
        rules = [r for r in prog.rules if prog.strata[r.head] == lvl]
        changed = True
        while changed:
            changed = False
            for r in rules:
                if r.head in true:
                    continue
                if all((lit.atom in true) == lit.positive for lit in r.body):
                    true.add(r.head)
                    changed = True
    return true


def world_probability(prog: GroundProgram, subset: set[str]) -> float:
    """Probability of one truth assignment to the probabilistic facts."""
    unknown = set(subset) - set(prog.facts)
    if unknown:
        raise ValueError(f"subset references unknown facts: {sorted(unknown)}")
    p = 1.0
    for atom, param in prog.facts.items():
        if isinstance(param, tuple):
            raise ValueError(f"fact {atom} has a beta parameter; use subjective_success")
        p *= param if atom in subset else 1.0 - param
    return p


def _world_masks(prog: GroundProgram, q: Query):
    """(entails q&E, entails E) per world; worlds are fact subsets by bit index."""
    atoms = prog.fact_atoms
    n = len(atoms)
    if n > _MAX_FACTS:
        raise TooLargeError(f"enumeration limited to {_MAX_FACTS} facts, got {n}")
    base = prog.herbrand_base()
    for atom, _ in q.evidence:
        if atom not in base:
            raise ValueError(f"evidence atom {atom!r} not in the program")
    if q.target not in base:
        raise ValueError(f"query atom {q.target!r} not in the program")
    qe_mask = np.zeros(2 ** n, dtype=bool)
    e_mask = np.zeros(2 ** n, dtype=bool)
    for w in range(2 ** n):
        world = {atoms[j] for j in range(n) if (w >> j) & 1}
        model = least_model(prog, world)
        ev_ok = all((atom in model) == val for atom, val in q.evidence)
        e_mask[w] = ev_ok
        qe_mask[w] = ev_ok and q.target in model
    return qe_mask, e_mask


def _world_weights(p: np.ndarray, n: int) -> np.ndarray:
    """(..., 2^n) product weights for every subset given fact probabilities p."""
    bits = ((np.arange(2 ** n)[:, None] >> np.arange(n)) & 1).astype(bool)
    w = np.ones(p.shape[:-1] + (2 ** n,))
    for j in range(n):
        pj = p[..., j:j + 1]
        w = w * np.where(bits[:, j], pj, 1.0 - pj)
    return w


def success_probability(prog: GroundProgram, q: Query) -> float:
    """Total probability of worlds whose least model entails the query,
    conditioned on the evidence conjunction when present."""
    mean_p = np.array([param[1] / (param[1] + param[2]) if isinstance(param, tuple) else param
                       for param in prog.facts.values()])
    qe_mask, e_mask = _world_masks(prog, q)
    weights = _world_weights(mean_p, len(mean_p))
    p_e = float(weights[e_mask].sum())
    if p_e <= 0.0:
        raise InconsistentEvidenceError("evidence has zero probability")
    return float(weights[qe_mask].sum()) / p_e


def subjective_success(prog: GroundProgram, q: Query,
                       n_samples: int = 10_000, seed: int = 0) -> Opinion:
    """Opinion about the query's success probability: sample the beta facts,
    evaluate the exact success probability per sample, moment-fit the spread."""
    atoms = prog.fact_atoms
    beta_idx = [j for j, a in enumerate(atoms) if isinstance(prog.facts[a], tuple)]
    if not beta_idx:
        return opinion_from_mean_strength(success_probability(prog, q), S_MAX)

    qe_mask, e_mask = _world_masks(prog, q)
    n = len(atoms)
    p = np.array([prog.facts[a] if not isinstance(prog.facts[a], tuple) else 0.0
                  for a in atoms])
    alpha = np.array([[prog.facts[atoms[j]][1], prog.facts[atoms[j]][2]] for j in beta_idx])

    draws = np.empty((n_samples, len(beta_idx)))
    beta_matrix(alpha, np.uint64(seed), n_samples, draws)

    vals = np.empty(n_samples)
    chunk = max(1, 2 ** 22 // (2 ** n))
    for start in range(0, n_samples, chunk):
        stop = min(start + chunk, n_samples)
        ps = np.tile(p, (stop - start, 1))
        ps[:, beta_idx] = draws[start:stop]
        weights = _world_weights(ps, n)
        p_e = weights[:, e_mask].sum(axis=1)
        p_qe = weights[:, qe_mask].sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            vals[start:stop] = np.where(p_e > 0, p_qe / p_e, np.nan)

    vals = vals[~np.isnan(vals)]
    if len(vals) == 0:
        raise InconsistentEvidenceError("evidence has zero probability in every sample")
    op, _ = moment_fit_flagged(float(vals.mean()), float(vals.var(ddof=1)))
    return op
