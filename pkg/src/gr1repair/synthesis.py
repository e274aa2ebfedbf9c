"""Two-player game construction, realizability, and automaton extraction.

The game is explicit-state: a game state is a bitmask over the declared
propositions (bit i = proposition i).  Each round the environment picks the
next input valuation subject to every env-safety conjunct, then the system
picks the next output valuation subject to every sys-safety conjunct.  The
system wins a play iff some env-liveness goal holds finitely often or every
sys-liveness goal holds infinitely often.

Realizability runs the standard triple-nested fixpoint (greatest over Z,
least over Y per system goal, greatest over X per environment goal) and
keeps the intermediate onion layers so extraction is deterministic.
Counterstrategies come from the dual fixpoint (least over the escalation
level, greatest over the per-goal trap, least over the attractor toward
each environment assumption).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import (
    NotRealizable,
    SpecRealizable,
    SpecValidationError,
    StateSpaceTooLarge,
)
from .logic import (
    And,
    Assignment,
    Atom,
    FalseConst,
    Formula,
    GR1Spec,
    Iff,
    Implies,
    Not,
    Or,
    TrueConst,
    eval_state,
    eval_transition,
)

DEFAULT_STATE_BOUND = 2 ** 22


# ---------------------------------------------------------------------------
# three-valued evaluation over partially-assigned bitmasks
# ---------------------------------------------------------------------------

def _eval3(f: Formula, cur: int, curk: int, nxt: int, nxtk: int,
           index: Mapping[str, int]) -> Optional[bool]:
    """True/False, or None while unassigned bits still matter."""
    if isinstance(f, Atom):
        bit = 1 << index[f.name]
        if f.primed:
            return bool(nxt & bit) if nxtk & bit else None
        return bool(cur & bit) if curk & bit else None
    if isinstance(f, TrueConst):
        return True
    if isinstance(f, FalseConst):
        return False
    if isinstance(f, Not):
        v = _eval3(f.arg, cur, curk, nxt, nxtk, index)
        return None if v is None else not v
    if isinstance(f, And):
        a = _eval3(f.left, cur, curk, nxt, nxtk, index)
        if a is False:
            return False
        b = _eval3(f.right, cur, curk, nxt, nxtk, index)
        if b is False:
            return False
        return True if (a is True and b is True) else None
    if isinstance(f, Or):
        a = _eval3(f.left, cur, curk, nxt, nxtk, index)
        if a is True:
            return True
        b = _eval3(f.right, cur, curk, nxt, nxtk, index)
        if b is True:
            return True
        return False if (a is False and b is False) else None
    if isinstance(f, Implies):
        a = _eval3(f.left, cur, curk, nxt, nxtk, index)
        if a is False:
            return True
        b = _eval3(f.right, cur, curk, nxt, nxtk, index)
        if b is True:
            return True
        return False if (a is True and b is False) else None
    if isinstance(f, Iff):
        a = _eval3(f.left, cur, curk, nxt, nxtk, index)
        b = _eval3(f.right, cur, curk, nxt, nxtk, index)
        if a is None or b is None:
            return None
        return a == b
    raise SpecValidationError(f"formula not supported in game positions: {f}")


def _expand_next(formulas, cur, nxt, nxtk, free, index):
    """Completions of `nxt` over `free` bits satisfying every formula."""
    live = []
    for f in formulas:
        v = _eval3(f, cur, -1, nxt, nxtk, index)
        if v is False:
            return
        if v is None:
            live.append(f)
    if not free:
        yield nxt
        return
    bit, rest = free[0], free[1:]
    yield from _expand_next(live, cur, nxt, nxtk | (1 << bit), rest, index)
    yield from _expand_next(live, cur, nxt | (1 << bit), nxtk | (1 << bit), rest, index)


def _expand_state(formulas, cur, curk, free, index):
    live = []
    for f in formulas:
        v = _eval3(f, cur, curk, 0, 0, index)
        if v is False:
            return
        if v is None:
            live.append(f)
    if not free:
        yield cur
        return
    bit, rest = free[0], free[1:]
    yield from _expand_state(live, cur, curk | (1 << bit), rest, index)
    yield from _expand_state(live, cur | (1 << bit), curk | (1 << bit), rest, index)


# ---------------------------------------------------------------------------
# arena
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GameState:
    """Input and output parts of one full valuation."""

    inputs: Assignment
    outputs: Assignment

    def full(self) -> Assignment:
        return self.inputs | self.outputs


class Arena:
    """Forward-reachable explicit game graph for one specification."""

    def __init__(self, spec: GR1Spec, state_bound: int = DEFAULT_STATE_BOUND):
        self.spec = spec
        self.names = [p.name for p in spec.propositions]
        self.index = {n: i for i, n in enumerate(self.names)}
        self.input_bits = [self.index[p.name] for p in spec.inputs]
        self.output_bits = [self.index[p.name] for p in spec.outputs]
        self.input_mask = sum(1 << b for b in self.input_bits)
        self.output_mask = sum(1 << b for b in self.output_bits)
        self.state_bound = state_bound

        self._goal_cache: dict[tuple[int, int], bool] = {}
        self._assign_cache: dict[int, Assignment] = {}

        self.init_pairs: list[tuple[int, Optional[list[int]]]] = []
        for xmask in sorted(
            _expand_state([spec.env_init], 0, 0, self.input_bits, self.index)
        ):
            ymasks = sorted(
                _expand_state(
                    [spec.sys_init], xmask, self.input_mask,
                    self.output_bits, self.index,
                )
            )
            self.init_pairs.append((xmask, ymasks or None))

        self.states: list[int] = []
        self.ids: dict[int, int] = {}
        # per state id: list of (next-input mask, tuple of successor ids)
        self.moves: list[list[tuple[int, tuple[int, ...]]]] = []

        for xmask, ymasks in self.init_pairs:
            for y in ymasks or []:
                self._intern(xmask | y)
        frontier = list(range(len(self.states)))
        while frontier:
            nxt_frontier = []
            for sid in frontier:
                mask = self.states[sid]
                entries = []
                for xmask in self._env_moves(mask):
                    succs = []
                    for full in self._sys_responses(mask, xmask):
                        tid, fresh = self._intern(full)
                        succs.append(tid)
                        if fresh:
                            nxt_frontier.append(tid)
                    entries.append((xmask, tuple(sorted(set(succs)))))
                self.moves[sid] = entries
            frontier = nxt_frontier

    def _intern(self, mask: int) -> tuple[int, bool]:
        if mask in self.ids:
            return self.ids[mask], False
        if len(self.states) >= self.state_bound:
            raise StateSpaceTooLarge(self.state_bound, len(self.names))
        sid = len(self.states)
        self.ids[mask] = sid
        self.states.append(mask)
        self.moves.append([])
        return sid, True

    def _env_moves(self, mask: int) -> list[int]:
        return sorted(
            _expand_next(
                list(self.spec.env_safety), mask, 0, self.output_mask,
                self.input_bits, self.index,
            )
        )

    def _sys_responses(self, mask: int, xmask: int) -> list[int]:
        return sorted(
            _expand_next(
                list(self.spec.sys_safety), mask, xmask,
                self.input_mask, self.output_bits, self.index,
            )
        )

    # -- conveniences -------------------------------------------------------
    def assignment(self, mask: int) -> Assignment:
        hit = self._assign_cache.get(mask)
        if hit is None:
            hit = Assignment(n for n, i in self.index.items() if mask & (1 << i))
            self._assign_cache[mask] = hit
        return hit

    def goal_holds(self, formula_id: int, formula: Formula, sid: int) -> bool:
        key = (formula_id, sid)
        hit = self._goal_cache.get(key)
        if hit is None:
            hit = eval_state(formula, self.assignment(self.states[sid]))
            self._goal_cache[key] = hit
        return hit

    def syspre(self, target) -> set[int]:
        out = set()
        for sid in range(len(self.states)):
            ok = True
            for _, succs in self.moves[sid]:
                if not any(t in target for t in succs):
                    ok = False
                    break
            if ok:
                out.add(sid)
        return out

    def envpre(self, target) -> set[int]:
        out = set()
        for sid in range(len(self.states)):
            for _, succs in self.moves[sid]:
                if not succs or all(t in target for t in succs):
                    out.add(sid)
                    break
        return out


# ---------------------------------------------------------------------------
# realizability
# ---------------------------------------------------------------------------

@dataclass
class GameSolution:
    """Winning-set verdict plus the measures extraction needs."""

    spec: GR1Spec
    arena: Arena
    realizable: bool
    winning: frozenset[int]
    witness_input: Optional[Assignment]
    z_iterations: list[int] = field(default_factory=list)
    # per system goal j (0-based): state id -> onion layer (1-based)
    dist: dict[int, dict[int, int]] = field(default_factory=dict)
    # (j, layer, i) -> converged inner X set
    xsets: dict[tuple[int, int, int], frozenset[int]] = field(default_factory=dict)
    pre_z: frozenset[int] = frozenset()

    def _sys_goal(self, j: int, sid: int) -> bool:
        return self.arena.goal_holds(j, self.spec.sys_liveness[j], sid)

    def _env_goal(self, i: int, sid: int) -> bool:
        n = len(self.spec.sys_liveness)
        return self.arena.goal_holds(n + i, self.spec.env_liveness[i], sid)


def check_realizability(
    spec: GR1Spec, state_bound: int = DEFAULT_STATE_BOUND
) -> GameSolution:
    arena = Arena(spec, state_bound)
    n_states = len(arena.states)
    n = len(spec.sys_liveness)
    m = len(spec.env_liveness)

    def sys_goal(j, sid):
        return arena.goal_holds(j, spec.sys_liveness[j], sid)

    def env_goal(i, sid):
        return arena.goal_holds(n + i, spec.env_liveness[i], sid)

    def mu_y(j: int, z, record: Optional[GameSolution] = None):
        y: set[int] = set()
        pre_z = arena.syspre(z)
        base = {s for s in pre_z if sys_goal(j, s)}
        layer = 0
        while True:
            layer += 1
            pre_y = arena.syspre(y)
            core = base | pre_y
            grown = set(y)
            for i in range(m):
                x = set(range(n_states))
                while True:
                    pre_x = arena.syspre(x)
                    x_new = (core | {s for s in pre_x if not env_goal(i, s)}) & x
                    if x_new == x:
                        break
                    x = x_new
                if record is not None:
                    record.xsets[(j, layer, i)] = frozenset(x)
                grown |= x
            if grown == y:
                break
            if record is not None:
                for s in grown - y:
                    record.dist[j].setdefault(s, layer)
            y = grown
        return y

    z = set(range(n_states))
    iterations = [n_states]
    while True:
        z_new = set(z)
        for j in range(n):
            z_new &= mu_y(j, z_new)
        iterations.append(len(z_new))
        if z_new == z:
            break
        z = z_new

    solution = GameSolution(
        spec=spec,
        arena=arena,
        realizable=True,
        winning=frozenset(z),
        witness_input=None,
        z_iterations=iterations,
    )
    for j in range(n):
        solution.dist[j] = {}
        mu_y(j, z, record=solution)
    solution.pre_z = frozenset(arena.syspre(z))

    witness = None
    for xmask, ymasks in arena.init_pairs:
        if ymasks is None:
            witness = xmask
            break
        if not any(arena.ids[xmask | y] in z for y in ymasks):
            witness = xmask
            break
    if witness is not None:
        solution.realizable = False
        solution.witness_input = arena.assignment(witness)
    return solution


# ---------------------------------------------------------------------------
# strategy (system side)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrategyNode:
    id: int
    state: Assignment
    rank: int
    # next-input true-set -> successor node id
    transitions: tuple[tuple[frozenset, int], ...]

    def successors(self) -> list[int]:
        return sorted({t for _, t in self.transitions})


@dataclass
class Strategy:
    variables: tuple[str, ...]
    input_variables: tuple[str, ...]
    output_variables: tuple[str, ...]
    nodes: list[StrategyNode]
    initial: tuple[int, ...]

    def input_label(self, node_id: int) -> Assignment:
        return self.nodes[node_id].state.restrict(self.input_variables)

    def output_label(self, node_id: int) -> Assignment:
        return self.nodes[node_id].state.restrict(self.output_variables)

    def game_state(self, node_id: int) -> GameState:
        return GameState(self.input_label(node_id), self.output_label(node_id))

    def step(self, node_id: int, next_inputs: Assignment) -> Optional[int]:
        key = frozenset(next_inputs.true_set)
        for inputs, target in self.nodes[node_id].transitions:
            if inputs == key:
                return target
        return None

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "input_variables": list(self.input_variables),
            "initial": list(self.initial),
            "nodes": {
                str(node.id): {
                    "rank": node.rank,
                    "state": [
                        1 if v in node.state.true_set else 0 for v in self.variables
                    ],
                    "trans": node.successors(),
                }
                for node in self.nodes
            },
        }

    def to_json(self, indent: int = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def extract_strategy(
    spec: GR1Spec,
    solution: Optional[GameSolution] = None,
    state_bound: int = DEFAULT_STATE_BOUND,
) -> Strategy:
    """Deterministic winning automaton.

    The pursued goal advances (cyclically, one step) exactly when the
    current goal holds in the transition's source state and every
    environment move admits a response inside the winning set; otherwise
    the choice descends the pursued goal's onion layers, or waits inside
    the environment-goal region that justified the current layer.
    Ties break toward the smallest layer, then the smallest encoding.
    """
    if solution is None:
        solution = check_realizability(spec, state_bound)
    if not solution.realizable:
        raise NotRealizable("specification admits no system strategy")
    arena = solution.arena
    n = len(spec.sys_liveness)
    m = len(spec.env_liveness)
    z = solution.winning

    def node_plan(sid: int, rank: int) -> tuple[int, int, bool]:
        """(pursued 0-based, next rank 1-based, advancing?)."""
        j0 = rank - 1
        if solution._sys_goal(j0, sid) and sid in solution.pre_z:
            pursued = rank % n
            return pursued, pursued + 1, True
        return j0, rank, False

    def choose(sid: int, pursued: int, advancing: bool, succs) -> int:
        dist = solution.dist[pursued]
        if advancing:
            pool = [t for t in succs if t in z]
            return min(pool, key=lambda t: (dist.get(t, 0), arena.states[t]))
        here = dist[sid]
        in_y = [t for t in succs if t in dist]
        progress = [t for t in in_y if dist[t] < here]
        if progress:
            return min(progress, key=lambda t: (dist[t], arena.states[t]))
        for i in range(m):
            xs = solution.xsets.get((pursued, here, i))
            if xs is not None and sid in xs and not solution._env_goal(i, sid):
                pool = [t for t in in_y if t in xs]
                if pool:
                    return min(pool, key=lambda t: (dist[t], arena.states[t]))
        if not in_y:
            raise SpecValidationError("internal: no measured successor")
        return min(in_y, key=lambda t: (dist[t], arena.states[t]))

    node_ids: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []
    records: list[Optional[StrategyNode]] = []

    def intern(sid: int, rank: int) -> int:
        key = (sid, rank)
        if key in node_ids:
            return node_ids[key]
        nid = len(order)
        node_ids[key] = nid
        order.append(key)
        records.append(None)
        return nid

    initial = []
    for xmask, ymasks in arena.init_pairs:
        for y in ymasks or []:
            sid = arena.ids[xmask | y]
            if sid in z:
                initial.append(intern(sid, 1))
                break

    cursor = 0
    while cursor < len(order):
        sid, rank = order[cursor]
        pursued, next_rank, advancing = node_plan(sid, rank)
        transitions = []
        for xmask, succs in arena.moves[sid]:
            target = choose(sid, pursued, advancing, succs)
            tid = intern(target, next_rank)
            transitions.append((frozenset(arena.assignment(xmask).true_set), tid))
        records[cursor] = StrategyNode(
            id=cursor,
            state=arena.assignment(arena.states[sid]),
            rank=rank,
            transitions=tuple(transitions),
        )
        cursor += 1

    return Strategy(
        variables=tuple(arena.names),
        input_variables=tuple(p.name for p in spec.inputs),
        output_variables=tuple(p.name for p in spec.outputs),
        nodes=[r for r in records if r is not None],
        initial=tuple(initial),
    )


# ---------------------------------------------------------------------------
# counterstrategy (environment side)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterstrategyNode:
    id: int
    state: Assignment
    rank: int              # goal index the system is pursuing, 1-based
    env_move: Assignment   # next-input choice; self-inputs at sinks
    transitions: tuple[int, ...]

    @property
    def is_sink(self) -> bool:
        return not self.transitions


@dataclass
class Counterstrategy:
    variables: tuple[str, ...]
    input_variables: tuple[str, ...]
    output_variables: tuple[str, ...]
    nodes: list[CounterstrategyNode]
    initial: tuple[int, ...]

    def input_label(self, node_id: int) -> Assignment:
        return self.nodes[node_id].state.restrict(self.input_variables)

    def output_label(self, node_id: int) -> Assignment:
        return self.nodes[node_id].state.restrict(self.output_variables)

    def game_state(self, node_id: int) -> GameState:
        return GameState(self.input_label(node_id), self.output_label(node_id))

    def goal_index(self, node_id: int) -> int:
        return self.nodes[node_id].rank

    def successors(self, node_id: int) -> tuple[int, ...]:
        return self.nodes[node_id].transitions

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "input_variables": list(self.input_variables),
            "initial": list(self.initial),
            "nodes": {
                str(node.id): {
                    "rank": node.rank,
                    "state": [
                        1 if v in node.state.true_set else 0 for v in self.variables
                    ],
                    "trans": list(node.transitions),
                }
                for node in self.nodes
            },
        }

    def to_json(self, indent: int = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Counterstrategy":
        variables = tuple(data["variables"])
        input_vars = tuple(data.get("input_variables", variables))
        output_vars = tuple(v for v in variables if v not in set(input_vars))
        raw = data["nodes"]
        parsed = []
        for key in sorted(raw, key=int):
            entry = raw[key]
            state = Assignment(v for v, bit in zip(variables, entry["state"]) if bit)
            parsed.append(
                (int(key), state, int(entry["rank"]),
                 tuple(int(t) for t in entry["trans"]))
            )
        by_id = {nid: state for nid, state, _, _ in parsed}
        nodes = []
        for nid, state, rank, trans in parsed:
            env_move = (
                by_id[trans[0]].restrict(input_vars)
                if trans else state.restrict(input_vars)
            )
            nodes.append(
                CounterstrategyNode(
                    id=nid, state=state, rank=rank,
                    env_move=env_move, transitions=trans,
                )
            )
        return cls(
            variables=variables,
            input_variables=input_vars,
            output_variables=output_vars,
            nodes=nodes,
            initial=tuple(int(i) for i in data.get("initial", [0])),
        )

    @classmethod
    def from_json(cls, text: str) -> "Counterstrategy":
        return cls.from_dict(json.loads(text))


def extract_counterstrategy(
    spec: GR1Spec,
    solution: Optional[GameSolution] = None,
    state_bound: int = DEFAULT_STATE_BOUND,
) -> Counterstrategy:
    """Deterministic environment automaton witnessing unrealizability.

    The environment escalates through the dual fixpoint levels, traps the
    system against one unsatisfiable goal, and cycles its own liveness
    assumptions via attractor layers.  Where no safe system response
    exists the automaton records one canonical doomed successor (fewest
    violated sys-safety conjuncts, then smallest encoding); doomed and
    response-less initial nodes are the sinks.
    """
    if solution is None:
        solution = check_realizability(spec, state_bound)
    if solution.realizable:
        raise SpecRealizable("specification is realizable; no counterstrategy")
    arena = solution.arena
    n_states = len(arena.states)
    n = len(spec.sys_liveness)
    m = len(spec.env_liveness)
    losing = set(range(n_states)) - set(solution.winning)

    def sys_goal(j, sid):
        return arena.goal_holds(j, spec.sys_liveness[j], sid)

    def env_goal(i, sid):
        return arena.goal_holds(n + i, spec.env_liveness[i], sid)

    # dual fixpoint: escalation levels, per-goal traps, attractor layers
    levels: dict[int, int] = {}
    trap_of: dict[int, int] = {}
    trap_sets: dict[tuple[int, int], frozenset[int]] = {}
    xlayers: dict[tuple[int, int, int], list[set[int]]] = {}

    w: set[int] = set()
    level = 0
    while True:
        level += 1
        grew = False
        pre_w = arena.envpre(w)
        for j in range(n):
            y = set(range(n_states))
            per_goal: list[tuple[set[int], list[set[int]]]] = []
            while True:
                pre_y = arena.envpre(y)
                t_set = {
                    s for s in pre_y if (not sys_goal(j, s)) or s in pre_w
                }
                y_new: Optional[set[int]] = None
                per_goal = []
                for i in range(m):
                    x: set[int] = set()
                    layers: list[set[int]] = []
                    while True:
                        pre_x = arena.envpre(x)
                        x_new = {s for s in t_set if env_goal(i, s) or s in pre_x}
                        if x_new == x:
                            break
                        layers.append(x_new - x)
                        x = x_new
                    per_goal.append((x, layers))
                    y_new = x if y_new is None else (y_new & x)
                assert y_new is not None
                if y_new == y:
                    break
                y = y_new
            if y - w:
                grew = True
            for s in y:
                if s not in levels:
                    levels[s] = level
                    trap_of[s] = j
            trap_sets[(level, j)] = frozenset(y)
            for i, (_, layers) in enumerate(per_goal):
                xlayers[(level, j, i)] = layers
            w |= y
        if not grew:
            break

    if w != losing:
        raise SpecValidationError(
            "internal: dual fixpoint disagrees with primal complement "
            f"({len(w)} vs {len(losing)} losing states)"
        )

    def layer_index(lvl, j, i, sid) -> Optional[int]:
        for r, members in enumerate(xlayers.get((lvl, j, i), [])):
            if sid in members:
                return r
        return None

    def choose_env(sid: int, lvl: int, trap_j: int, env_i: int):
        """(next-input mask, case) for the env's committed move."""
        moves = arena.moves[sid]
        kills = [x for x, succs in moves if not succs]
        if kills:
            return min(kills), "kill"

        def all_into(target):
            return [
                x for x, succs in moves if succs and all(t in target for t in succs)
            ]

        if sys_goal(trap_j, sid):
            prior = {s for s, l in levels.items() if l < lvl}
            return min(all_into(prior)), "escalate"
        if env_goal(env_i, sid):
            return min(all_into(trap_sets[(lvl, trap_j)])), "advance"
        r = layer_index(lvl, trap_j, env_i, sid)
        if r is not None and r > 0:
            below: set[int] = set()
            for members in xlayers[(lvl, trap_j, env_i)][:r]:
                below |= members
            cands = all_into(below)
            if cands:
                return min(cands), "descend"
        return min(all_into(trap_sets[(lvl, trap_j)])), "hold"

    node_ids: dict[tuple, int] = {}
    order: list[tuple] = []
    records: list[Optional[CounterstrategyNode]] = []

    def intern(key) -> int:
        if key in node_ids:
            return node_ids[key]
        nid = len(order)
        node_ids[key] = nid
        order.append(key)
        records.append(None)
        return nid

    initial = []
    for xmask, ymasks in arena.init_pairs:
        if ymasks is None:
            ymask = _min_violation_outputs(spec, arena, None, xmask)
            initial.append(intern(("dead", xmask, ymask, 1)))
            continue
        sids = [arena.ids[xmask | y] for y in ymasks]
        if all(s in losing for s in sids):
            for sid in sids:
                lvl = levels[sid]
                initial.append(intern(("live", sid, 1, lvl, trap_of[sid], 0)))

    input_names = [p.name for p in spec.inputs]
    cursor = 0
    while cursor < len(order):
        key = order[cursor]
        if key[0] == "dead":
            _, xmask, ymask, rank = key
            state = arena.assignment(xmask | ymask)
            records[cursor] = CounterstrategyNode(
                id=cursor, state=state, rank=rank,
                env_move=state.restrict(input_names),
                transitions=(),
            )
            cursor += 1
            continue
        _, sid, rank, lvl, trap_j, env_i = key
        xmask, case = choose_env(sid, lvl, trap_j, env_i)
        next_rank = rank % n + 1 if sys_goal(rank - 1, sid) else rank
        succs = dict(arena.moves[sid]).get(xmask, ())
        trans = []
        if not succs:
            ymask = _min_violation_outputs(spec, arena, arena.states[sid], xmask)
            trans.append(intern(("dead", xmask, ymask, next_rank)))
        else:
            for t in succs:
                if case == "escalate":
                    lvl2 = levels[t]
                    trans.append(
                        intern(("live", t, next_rank, lvl2, trap_of[t], 0))
                    )
                elif case == "advance":
                    trans.append(
                        intern(("live", t, next_rank, lvl, trap_j, (env_i + 1) % m))
                    )
                else:
                    trans.append(intern(("live", t, next_rank, lvl, trap_j, env_i)))
        records[cursor] = CounterstrategyNode(
            id=cursor,
            state=arena.assignment(arena.states[sid]),
            rank=rank,
            env_move=arena.assignment(xmask),
            transitions=tuple(sorted(set(trans))),
        )
        cursor += 1

    return Counterstrategy(
        variables=tuple(arena.names),
        input_variables=tuple(input_names),
        output_variables=tuple(p.name for p in spec.outputs),
        nodes=[r for r in records if r is not None],
        initial=tuple(initial),
    )


def _min_violation_outputs(spec, arena, cur_mask: Optional[int], xmask: int) -> int:
    """Canonical doomed output choice: fewest violated conjuncts, then lex."""
    best = None
    for combo in range(1 << len(arena.output_bits)):
        ymask = 0
        for k, bit in enumerate(arena.output_bits):
            if combo & (1 << k):
                ymask |= 1 << bit
        if cur_mask is None:
            count = 0
        else:
            cur = arena.assignment(cur_mask)
            nxt = arena.assignment(xmask | ymask)
            count = sum(
                0 if eval_transition(f, cur, nxt) else 1 for f in spec.sys_safety
            )
        key = (count, ymask)
        if best is None or key < best:
            best = key
    return best[1]


# ---------------------------------------------------------------------------
# simulation harness
# ---------------------------------------------------------------------------

def simulate_strategy(
    spec: GR1Spec,
    strategy: Strategy,
    steps: int,
    rng: random.Random,
    solution: Optional[GameSolution] = None,
):
    """Drive the strategy with random assumption-respecting environment moves.

    Yields (current, next) full-assignment pairs, one per executed step;
    stops early if the environment deadlocks.
    """
    if solution is None:
        solution = check_realizability(spec)
    arena = solution.arena
    node = strategy.nodes[rng.choice(list(strategy.initial))]
    for _ in range(steps):
        mask = 0
        for name in node.state.true_set:
            mask |= 1 << arena.index[name]
        options = arena.moves[arena.ids[mask]]
        if not options:
            return
        xmask, _ = options[rng.randrange(len(options))]
        succ = strategy.step(node.id, arena.assignment(xmask))
        if succ is None:
            raise SpecValidationError(
                "strategy has no transition for a legal environment move"
            )
        nxt = strategy.nodes[succ]
        yield node.state, nxt.state
        node = nxt
