//! Backward proof search over the one-step expansions of [`crate::proof`].
//!
//! [`prove`] runs a depth-first AND–OR search: at each goal it tries the
//! rules in `rule_order`, generating every positional instance via the same
//! code the checker validates against, so anything found passes
//! [`crate::proof::check_proof`] by construction.  CutRule is never
//! searched — cut is admissible, so it can only add proofs that already
//! exist without it.
//!
//! With `loop_check` on, a goal already open on the current branch is
//! pruned; since any proof repeating a sequent on a branch can be shortened
//! past the repetition, this loses no provable sequents.  In this mode
//! (and with no depth bound) the searcher first decides provability of
//! each goal against a least fixpoint of the reachable AND–OR graph —
//! every distinct goal is expanded exactly once — and lets the tree
//! construction descend only into provable subgoals, so unprovable
//! regions cost linear time instead of being re-explored per branch.  For the built-in
//! extensions (whose structural rules preserve the multiset of category
//! leaves) the pruned search terminates without a depth bound: the logical
//! rules strictly shrink the sequent and the structural orbit of any
//! antecedent is finite.  A custom extension whose rules grow terms when
//! read backwards can defeat this; set `max_depth` in that case.
//!
//! [`oracle_provable`] is the reference judge: plain exhaustive recursion
//! over the same expansions, bounded by tree height, memoised exactly on
//! `(antecedent, succedent, height)`.

use crate::form::{Form, Term};
use crate::proof::{expansions_for, Dertree, RuleName, Sequent};
use std::collections::{HashMap, HashSet};

/// Knobs for [`prove`] and [`prove_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum proof-tree height, where a single node counts 1.  `None`
    /// (the default) leaves the search unbounded; termination then relies
    /// on `loop_check`.
    pub max_depth: Option<usize>,
    /// How many distinct proofs [`prove_all`] may return (at least 1).
    pub max_solutions: usize,
    /// Rules to try, in order.  CutRule entries are ignored.
    pub rule_order: Vec<RuleName>,
    /// Prune goals already open on the current branch.
    pub loop_check: bool,
}

/// The eight searchable rules in their canonical order.
pub const DEFAULT_RULE_ORDER: [RuleName; 8] = [
    RuleName::SeqAxiom,
    RuleName::RightSlash,
    RuleName::RightBackslash,
    RuleName::RightDot,
    RuleName::LeftSlash,
    RuleName::LeftBackslash,
    RuleName::LeftDot,
    RuleName::SeqExt,
];

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            max_depth: None,
            max_solutions: 1,
            rule_order: DEFAULT_RULE_ORDER.to_vec(),
            loop_check: true,
        }
    }
}

/// Counters reported by [`prove_all_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidate rule instances generated during the search.
    pub expansions: usize,
}

/// Decides absolute provability by exhausting the reachable AND–OR graph:
/// nodes are goals `(antecedent, succedent)`, an edge is one rule instance
/// with its premises, and provability is the least fixpoint of "some edge
/// has all premises provable".  Each goal is expanded once; answers are
/// shared across the whole search, which keeps unprovable regions linear
/// where a plain depth-first walk would revisit them per branch.
struct Decider {
    ids: HashMap<(Term, Form), usize>,
    proved: Vec<bool>,
    explored: Vec<bool>,
    /// edge → (conclusion node, premises still unproved)
    edges: Vec<(usize, usize)>,
    /// node → edges it appears in as a premise (with multiplicity)
    feeds: Vec<Vec<usize>>,
    expansions: usize,
}

impl Decider {
    fn new() -> Decider {
        Decider {
            ids: HashMap::new(),
            proved: Vec::new(),
            explored: Vec::new(),
            edges: Vec::new(),
            feeds: Vec::new(),
            expansions: 0,
        }
    }

    fn node(&mut self, ante: &Term, succ: &Form) -> usize {
        if let Some(&id) = self.ids.get(&(ante.clone(), succ.clone())) {
            return id;
        }
        let id = self.proved.len();
        self.ids.insert((ante.clone(), succ.clone()), id);
        self.proved.push(false);
        self.explored.push(false);
        self.feeds.push(Vec::new());
        id
    }

    /// Mark `n` proved and propagate through the edges it feeds.
    fn settle(&mut self, n: usize) {
        if self.proved[n] {
            return;
        }
        self.proved[n] = true;
        let mut queue = vec![n];
        while let Some(m) = queue.pop() {
            for k in 0..self.feeds[m].len() {
                let e = self.feeds[m][k];
                self.edges[e].1 -= 1;
                if self.edges[e].1 == 0 {
                    let target = self.edges[e].0;
                    if !self.proved[target] {
                        self.proved[target] = true;
                        queue.push(target);
                    }
                }
            }
        }
    }

    fn provable(&mut self, s: &Sequent) -> bool {
        let root = self.node(&s.ante, &s.succ);
        let mut stack = vec![(root, s.clone())];
        while let Some((id, goal)) = stack.pop() {
            if self.explored[id] {
                continue;
            }
            self.explored[id] = true;
            for rule in DEFAULT_RULE_ORDER {
                for cand in expansions_for(&goal, rule) {
                    self.expansions += 1;
                    let Dertree::Der(_, _, subgoals) = &cand else { unreachable!() };
                    let mut unproved = 0;
                    let edge = self.edges.len();
                    let mut premises = Vec::with_capacity(subgoals.len());
                    for g in subgoals {
                        let h = g.head();
                        let child = self.node(&h.ante, &h.succ);
                        premises.push(child);
                        if !self.explored[child] {
                            stack.push((child, h.clone()));
                        }
                        if !self.proved[child] {
                            unproved += 1;
                            self.feeds[child].push(edge);
                        }
                    }
                    self.edges.push((id, unproved));
                    if unproved == 0 {
                        self.settle(id);
                    }
                }
            }
        }
        self.proved[root]
    }
}

struct Searcher<'a> {
    opts: &'a SearchOptions,
    open: HashSet<(Term, Form)>,
    decider: Decider,
    stats: SearchStats,
}

impl Searcher<'_> {
    /// Up to `limit` distinct proofs of `s` with height ≤ `remaining` (when
    /// bounded), in deterministic rule-then-position order.
    fn solve(&mut self, s: &Sequent, remaining: Option<usize>, limit: usize) -> Vec<Dertree> {
        if limit == 0 || remaining == Some(0) {
            return Vec::new();
        }
        // In the unbounded loop-checked mode, settle provability up front so
        // the tree construction below never descends into a hopeless goal.
        // (Under a depth budget failures are budget-relative, and without
        // the loop check divergence is the caller's choice; both keep the
        // plain behaviour.)
        if self.opts.loop_check && remaining.is_none() && !self.decider.provable(s) {
            return Vec::new();
        }
        let key = (s.ante.clone(), s.succ.clone());
        if self.opts.loop_check {
            if self.open.contains(&key) {
                return Vec::new();
            }
            self.open.insert(key.clone());
        }
        let next = remaining.map(|d| d - 1);
        let mut out: Vec<Dertree> = Vec::new();
        'rules: for rule in &self.opts.rule_order {
            if *rule == RuleName::CutRule {
                continue;
            }
            for cand in expansions_for(s, *rule) {
                self.stats.expansions += 1;
                let Dertree::Der(_, r, subgoals) = &cand else { unreachable!() };
                // every subgoal must be solved; combine solutions left to
                // right, truncating the product at `limit`
                let mut combos: Vec<Vec<Dertree>> = vec![Vec::new()];
                for g in subgoals {
                    let sols = self.solve(g.head(), next, limit);
                    if sols.is_empty() {
                        combos.clear();
                        break;
                    }
                    let mut grown = Vec::new();
                    'grow: for partial in &combos {
                        for sol in &sols {
                            let mut next_partial = partial.clone();
                            next_partial.push(sol.clone());
                            grown.push(next_partial);
                            if grown.len() >= limit {
                                break 'grow;
                            }
                        }
                    }
                    combos = grown;
                }
                for children in combos {
                    let d = Dertree::Der(s.clone(), *r, children);
                    if !out.contains(&d) {
                        out.push(d);
                        if out.len() >= limit {
                            break 'rules;
                        }
                    }
                }
            }
        }
        if self.opts.loop_check {
            self.open.remove(&key);
        }
        out
    }
}

/// Search for one proof of `s`.  Any result passes
/// [`crate::proof::check_proof`] and is cut-free.
pub fn prove(s: &Sequent, opts: &SearchOptions) -> Option<Dertree> {
    let mut one = opts.clone();
    one.max_solutions = 1;
    prove_all(s, &one).into_iter().next()
}

/// Up to `opts.max_solutions` distinct proofs, deterministically ordered by
/// rule order, then position, then child solutions.
pub fn prove_all(s: &Sequent, opts: &SearchOptions) -> Vec<Dertree> {
    prove_all_stats(s, opts).0
}

/// [`prove_all`] plus search counters.
pub fn prove_all_stats(s: &Sequent, opts: &SearchOptions) -> (Vec<Dertree>, SearchStats) {
    let mut searcher = Searcher {
        opts,
        open: HashSet::new(),
        decider: Decider::new(),
        stats: SearchStats::default(),
    };
    let limit = opts.max_solutions.max(1);
    let sols = searcher.solve(s, opts.max_depth, limit);
    searcher.stats.expansions += searcher.decider.expansions;
    (sols, searcher.stats)
}

/// Reference decision: is there a (cut-free) proof of `s` of height at most
/// `depth`, counting a single node as height 1?  Exhaustive recursion over
/// the same expansions the checker accepts, memoised exactly — no pruning,
/// no rule-order heuristics.
pub fn oracle_provable(s: &Sequent, depth: usize) -> bool {
    fn go(
        s: &Sequent,
        depth: usize,
        memo: &mut HashMap<(Term, Form, usize), bool>,
    ) -> bool {
        if depth == 0 {
            return false;
        }
        let key = (s.ante.clone(), s.succ.clone(), depth);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut provable = false;
        'exps: for rule in DEFAULT_RULE_ORDER {
            for cand in expansions_for(s, rule) {
                let Dertree::Der(_, _, subgoals) = &cand else { unreachable!() };
                if subgoals.iter().all(|g| go(g.head(), depth - 1, memo)) {
                    provable = true;
                    break 'exps;
                }
            }
        }
        memo.insert(key, provable);
        provable
    }
    go(s, depth, &mut HashMap::new())
}
