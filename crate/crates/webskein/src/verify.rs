//! Relation suites run over bounded grids of `(n, m, N)`.
//!
//! Every suite reports one outcome per relation instance, keyed so that the
//! output order is stable. A failing instance carries the first block where
//! the two sides differ.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use webskein_core::affine::{affine_block, affine_operator, bracket_form_check, specialize_params, EvalParams};
use webskein_core::braiding::{t_block, tp_block, tpp_block, Sign};
use webskein_core::ladder::{
    eval_closed_in, eval_matrix_in, full_twist, reidemeister_pair, twist_coefficient, unknot, braid_closure,
    LadderDiagram, Layer, Move, MoveContext,
};
use webskein_core::moyreduce::{reduce, Reduction, RungWord};
use webskein_core::repcore::{
    apply_chevalley, rung_word_block, BlockOperator, Chevalley, Monomial, RepSpace, RepVector, SparseMatrix,
    Variable,
};
use webskein_core::weights::{all_sequences, rung_target, swap_adjacent, RungKind};
use webskein_core::{qbinom, qint, Error, GlSequence, Object, RingElem};

use RungKind::{E, F};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    QgRelations,
    AffineRelations,
    BraidRelations,
    WebRelations,
    Sl2Table,
    Reidemeister,
    Twist,
    BracketForm,
    MoySoundness,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::QgRelations,
        Suite::AffineRelations,
        Suite::BraidRelations,
        Suite::WebRelations,
        Suite::Sl2Table,
        Suite::Reidemeister,
        Suite::Twist,
        Suite::BracketForm,
        Suite::MoySoundness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::QgRelations => "qg-relations",
            Suite::AffineRelations => "affine-relations",
            Suite::BraidRelations => "braid-relations",
            Suite::WebRelations => "web-relations",
            Suite::Sl2Table => "sl2-table",
            Suite::Reidemeister => "reidemeister",
            Suite::Twist => "twist",
            Suite::BracketForm => "bracket-form",
            Suite::MoySoundness => "moy-soundness",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{}`", s))
    }
}

/// Bounds on the number of uprights and the total label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub max_m: usize,
    pub max_total: i32,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { max_m: 4, max_total: 4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// The instance could not be decided. Only the MOY reducer produces this.
    Partial,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Partial => "PARTIAL",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub key: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub outcomes: Vec<Outcome>,
}

impl SuiteReport {
    pub fn count(&self, s: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == s).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0 && !self.outcomes.is_empty()
    }

    pub fn summary(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let partial = self.count(Status::Partial);
        let mut s = format!("{}: {} ({}/{} instances", self.suite, verdict, self.count(Status::Pass), self.outcomes.len());
        if partial > 0 {
            s.push_str(&format!(", {} partial", partial));
        }
        s.push(')');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&format!("{} {}\n", o.status, o.key));
            if let Some(c) = &o.counterexample {
                for line in c.lines() {
                    out.push_str("    ");
                    out.push_str(line);
                    out.push('\n');
                }
            }
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "passed": self.passed(),
            "summary": self.summary(),
            "outcomes": self.outcomes,
        })
    }
}

#[derive(Default)]
struct Collector {
    out: Vec<Outcome>,
}

impl Collector {
    fn check(&mut self, key: String, diff: Option<String>) {
        let status = if diff.is_some() { Status::Fail } else { Status::Pass };
        self.out.push(Outcome { key, status, counterexample: diff });
    }

    fn partial(&mut self, key: String, note: String) {
        self.out.push(Outcome { key, status: Status::Partial, counterexample: Some(note) });
    }

    fn report(self, suite: Suite) -> SuiteReport {
        SuiteReport { suite: suite.name().to_string(), outcomes: self.out }
    }
}

pub fn run_suite(suite: Suite, grid: Grid) -> Result<SuiteReport, Error> {
    let mut c = Collector::default();
    match suite {
        Suite::QgRelations => qg_relations(&mut c, grid)?,
        Suite::AffineRelations => affine_relations(&mut c, grid)?,
        Suite::BraidRelations => braid_relations(&mut c, grid)?,
        Suite::WebRelations => web_relations(&mut c, grid)?,
        Suite::Sl2Table => sl2_table(&mut c)?,
        Suite::Reidemeister => reidemeister(&mut c, grid)?,
        Suite::Twist => twist(&mut c)?,
        Suite::BracketForm => bracket_form(&mut c, grid)?,
        Suite::MoySoundness => moy_soundness(&mut c, grid, 120, 0x5eed)?,
    }
    Ok(c.report(suite))
}

// ---- rendering helpers -------------------------------------------------------

fn render_monomial(mono: Monomial, m: usize) -> String {
    let vars: Vec<String> = mono.vars(m).iter().map(|v| format!("z{}{}", v.row, v.col)).collect();
    if vars.is_empty() {
        "1".to_string()
    } else {
        vars.join("*")
    }
}

pub fn render_vector(v: &RepVector, m: usize) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    v.terms
        .iter()
        .map(|(mono, c)| format!("({})*{}", c, render_monomial(*mono, m)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn entries_of(mat: Option<&SparseMatrix>) -> BTreeMap<(usize, usize), RingElem> {
    mat.map(|m| m.entries().map(|(r, c, x)| ((r, c), x.clone())).collect()).unwrap_or_default()
}

/// The first block where two operators differ, with up to four differing
/// entries.
pub fn op_diff(lhs: &BlockOperator, rhs: &BlockOperator) -> Option<String> {
    if lhs == rhs {
        return None;
    }
    let mut keys: Vec<&(GlSequence, GlSequence)> = lhs.blocks.keys().chain(rhs.blocks.keys()).collect();
    keys.sort();
    keys.dedup();
    for key in keys {
        let a = lhs.blocks.get(key);
        let b = rhs.blocks.get(key);
        if a == b {
            continue;
        }
        let (ea, eb) = (entries_of(a), entries_of(b));
        let mut pos: Vec<&(usize, usize)> = ea.keys().chain(eb.keys()).collect();
        pos.sort();
        pos.dedup();
        let mut text = format!("block {} -> {}", key.0, key.1);
        let zero = RingElem::zero();
        let mut shown = 0;
        for p in pos {
            let (x, y) = (ea.get(p).unwrap_or(&zero), eb.get(p).unwrap_or(&zero));
            if x != y && shown < 4 {
                text.push_str(&format!("\n  [{},{}] lhs = {}  rhs = {}", p.0, p.1, x, y));
                shown += 1;
            }
        }
        return Some(text);
    }
    None
}

fn scalar_diff(lhs: &RingElem, rhs: &RingElem) -> Option<String> {
    (lhs != rhs).then(|| format!("lhs = {}\nrhs = {}", lhs, rhs))
}

// ---- operator helpers --------------------------------------------------------

fn ops_over<Fn_>(space: &RepSpace, total: i32, f: Fn_) -> Result<BlockOperator, Error>
where
    Fn_: Fn(&GlSequence) -> Result<Arc<(Object, SparseMatrix)>, Error>,
{
    let mut out = BlockOperator::zero();
    for s in space.blocks_of_degree(total) {
        let blk = f(&s)?;
        if let Object::Seq(t) = &blk.0 {
            out.insert_add(s.clone(), t.clone(), blk.1.clone());
        }
    }
    Ok(out)
}

fn rung(space: &RepSpace, total: i32, kind: RungKind, i: usize, k: u32) -> Result<BlockOperator, Error> {
    ops_over(space, total, |s| space.divided_block(s, kind, i, k))
}

/// Operators composed in application order.
fn chain(ops: &[&BlockOperator]) -> BlockOperator {
    let mut acc = ops[0].clone();
    for o in &ops[1..] {
        acc = acc.then(o);
    }
    acc
}

/// The block-diagonal scalar operator `s ↦ f(s)`.
fn diag(space: &RepSpace, total: i32, f: impl Fn(&GlSequence) -> RingElem) -> Result<BlockOperator, Error> {
    let mut out = BlockOperator::zero();
    for s in space.blocks_of_degree(total) {
        let c = f(&s);
        if !c.is_zero() {
            out.insert_add(s.clone(), s.clone(), SparseMatrix::identity(space.dim(&s)?).scale(&c));
        }
    }
    Ok(out)
}

fn word_op(space: &RepSpace, s: &GlSequence, items: &[(RungKind, usize, u32)]) -> Result<BlockOperator, Error> {
    Ok(match rung_word_block(space, s, items)? {
        Some((t, mat)) => BlockOperator::single(s.clone(), t, mat),
        None => BlockOperator::zero(),
    })
}

fn ident_op(space: &RepSpace, s: &GlSequence) -> Result<BlockOperator, Error> {
    space.identity(s)
}

fn spaces(ns: &[u32], grid: Grid, min_m: usize, max_m: usize) -> Result<Vec<(u32, usize, RepSpace)>, Error> {
    let mut out = Vec::new();
    for &n in ns {
        for m in min_m..=max_m.min(grid.max_m) {
            out.push((n, m, RepSpace::new(n, m)?));
        }
    }
    Ok(out)
}

fn totals(n: u32, m: usize, cap: i32) -> std::ops::RangeInclusive<i32> {
    0..=cap.min(n as i32 * m as i32)
}

// ---- qg-relations ------------------------------------------------------------

fn apply_word(m: usize, gens: &[Chevalley], v: &RepVector) -> RepVector {
    gens.iter().fold(v.clone(), |w, g| apply_chevalley(*g, m, &w))
}

fn cartan(i: usize, j: usize) -> i32 {
    match i.abs_diff(j) {
        0 => 2,
        1 => -1,
        _ => 0,
    }
}

fn neg(v: &RepVector) -> RepVector {
    v.scale(&RingElem::int(-1))
}

/// Checks `lhs(v) = rhs(v)` on every basis vector of degree `total`.
fn vector_relation(
    space: &RepSpace,
    total: i32,
    rel: impl Fn(&RepVector) -> Result<(RepVector, RepVector), Error>,
) -> Result<Option<String>, Error> {
    for s in space.blocks_of_degree(total) {
        for &mono in &space.weight_space_basis(&s)?.monomials {
            let v = RepVector::basis(mono);
            let (l, r) = rel(&v)?;
            if l != r {
                return Ok(Some(format!(
                    "on {} in block {}\n  lhs = {}\n  rhs = {}",
                    render_monomial(mono, space.m),
                    s,
                    render_vector(&l, space.m),
                    render_vector(&r, space.m)
                )));
            }
        }
    }
    Ok(None)
}

fn qg_relations(c: &mut Collector, grid: Grid) -> Result<(), Error> {
    use Chevalley::{E as Ce, F as Cf, K};
    for (n, m, space) in spaces(&[2, 3], grid, 2, 4)? {
        for total in totals(n, m, grid.max_total) {
            let key = |rel: String| format!("n={} m={} N={} {}", n, m, total, rel);
            let sp = &space;
            for i in 1..m {
                for j in i..m {
                    let d = vector_relation(sp, total, |v| {
                        let l = apply_word(m, &[K(i, 1), K(j, 1), K(i, -1)], v);
                        Ok((l, apply_word(m, &[K(j, 1)], v)))
                    })?;
                    c.check(key(format!("K{}K{}=K{}K{}", i, j, j, i)), d);
                }
            }
            for i in 1..m {
                for j in 1..m {
                    let q = RingElem::q_pow(cartan(i, j));
                    let d = vector_relation(sp, total, |v| {
                        let l = apply_word(m, &[K(i, -1), Ce(j), K(i, 1)], v);
                        Ok((l, apply_word(m, &[Ce(j)], v).scale(&q)))
                    })?;
                    c.check(key(format!("K{i}E{j}K{i}^-1=q^{}E{j}", cartan(i, j))), d);
                    let qi = RingElem::q_pow(-cartan(i, j));
                    let d = vector_relation(sp, total, |v| {
                        let l = apply_word(m, &[K(i, -1), Cf(j), K(i, 1)], v);
                        Ok((l, apply_word(m, &[Cf(j)], v).scale(&qi)))
                    })?;
                    c.check(key(format!("K{i}F{j}K{i}^-1=q^{}F{j}", -cartan(i, j))), d);
                }
            }
            let qmq = &RingElem::q_pow(1) - &RingElem::q_pow(-1);
            for i in 1..m {
                for j in 1..m {
                    let d = vector_relation(sp, total, |v| {
                        let l = apply_word(m, &[Cf(j), Ce(i)], v).add(&neg(&apply_word(m, &[Ce(i), Cf(j)], v)));
                        let r = if i == j {
                            let kk = apply_chevalley(K(i, 1), m, v).add(&neg(&apply_chevalley(K(i, -1), m, v)));
                            let mut out = RepVector::zero();
                            for (mono, x) in &kk.terms {
                                out.add_term(*mono, &x.exact_div(&qmq)?);
                            }
                            out
                        } else {
                            RepVector::zero()
                        };
                        Ok((l, r))
                    })?;
                    c.check(key(format!("[E{},F{}]", i, j)), d);
                }
            }
            let two = qint(2);
            for i in 1..m {
                for j in 1..m {
                    if i.abs_diff(j) == 1 {
                        for (name, gi, gj) in [("E", Ce(i), Ce(j)), ("F", Cf(i), Cf(j))] {
                            let d = vector_relation(sp, total, |v| {
                                let a = apply_word(m, &[gj, gi, gi], v);
                                let b = apply_word(m, &[gi, gj, gi], v).scale(&two);
                                let cc = apply_word(m, &[gi, gi, gj], v);
                                Ok((a.add(&cc), b))
                            })?;
                            c.check(key(format!("serre {n}{i}{n}{i}{n}{j} i={i} j={j}", n = name)), d);
                        }
                    }
                    if i + 1 < j {
                        for (name, gi, gj) in [("E", Ce(i), Ce(j)), ("F", Cf(i), Cf(j))] {
                            let d = vector_relation(sp, total, |v| {
                                Ok((apply_word(m, &[gi, gj], v), apply_word(m, &[gj, gi], v)))
                            })?;
                            c.check(key(format!("commute {n}{i}{n}{j}", n = name)), d);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

// ---- sl2-table ---------------------------------------------------------------

fn table_vector(terms: &[(i32, [(u32, u32); 2])]) -> RepVector {
    let mut v = RepVector::zero();
    for (e, vars) in terms {
        let vs: Vec<Variable> = vars.iter().map(|&(r, c)| Variable::new(r, c)).collect();
        v.add_term(Monomial::from_vars(&vs, 2).unwrap(), &RingElem::q_pow(*e));
    }
    v
}

/// The E and F images of the twelve basis vectors for `m = n = N = 2`.
pub fn sl2_table_entries() -> Vec<((u32, u32), (u32, u32), RungKind, RepVector)> {
    let z = |a: (u32, u32), b: (u32, u32)| [a, b];
    let rows: Vec<((u32, u32), (u32, u32), RepVector, RepVector)> = vec![
        ((1, 1), (2, 1), table_vector(&[(0, z((1, 1), (2, 2))), (-1, z((1, 2), (2, 1)))]), RepVector::zero()),
        ((1, 1), (1, 2), RepVector::zero(), RepVector::zero()),
        ((2, 1), (2, 2), RepVector::zero(), RepVector::zero()),
        ((1, 1), (2, 2), table_vector(&[(1, z((1, 2), (2, 2)))]), table_vector(&[(1, z((1, 1), (2, 1)))])),
        ((1, 2), (2, 1), table_vector(&[(0, z((1, 2), (2, 2)))]), table_vector(&[(0, z((1, 1), (2, 1)))])),
        ((1, 2), (2, 2), RepVector::zero(), table_vector(&[(-1, z((1, 2), (2, 1))), (0, z((1, 1), (2, 2)))])),
    ];
    let mut out = Vec::new();
    for (a, b, e, f) in rows {
        out.push((a, b, E, e));
        out.push((a, b, F, f));
    }
    out
}

fn sl2_table(c: &mut Collector) -> Result<(), Error> {
    for (a, b, kind, expect) in sl2_table_entries() {
        let mono = Monomial::from_vars(&[Variable::new(a.0, a.1), Variable::new(b.0, b.1)], 2).unwrap();
        let gen = match kind {
            E => Chevalley::E(1),
            F => Chevalley::F(1),
        };
        let got = apply_chevalley(gen, 2, &RepVector::basis(mono));
        let key = format!("{:?}(z{}{}*z{}{}) = {}", kind, a.0, a.1, b.0, b.1, render_vector(&expect, 2));
        let diff = (got != expect).then(|| format!("computed {}", render_vector(&got, 2)));
        c.check(key, diff);
    }
    Ok(())
}

// ---- braid-relations ---------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
enum Braid {
    Tpp,
    Tp,
    T,
}

impl Braid {
    fn name(self) -> &'static str {
        match self {
            Braid::Tpp => "T''",
            Braid::Tp => "T'",
            Braid::T => "T",
        }
    }
}

fn braid_op(space: &RepSpace, total: i32, b: Braid, i: usize, sign: Sign) -> Result<BlockOperator, Error> {
    ops_over(space, total, |s| match b {
        Braid::Tpp => tpp_block(space, s, i, sign),
        Braid::Tp => tp_block(space, s, i, sign),
        Braid::T => t_block(space, s, i, sign),
    })
}

/// `bar(T'_i)` summed directly from the divided-power expansion of `T'_i`
/// with every coefficient barred. The bar involution fixes `E` and `F`.
fn bar_tp_op(space: &RepSpace, total: i32, i: usize) -> Result<BlockOperator, Error> {
    let n = space.n as i32;
    let mut out = BlockOperator::zero();
    for s in space.blocks_of_degree(total) {
        let lam = s.lambda(i);
        for a in 0..=n {
            for cc in 0..=n {
                let b = a + cc - lam;
                if b < 0 {
                    continue;
                }
                let coeff = RingElem::signed_q_pow(b as i64, -a * cc + b).bar();
                let w = word_op(space, &s, &[(F, i, cc as u32), (E, i, b as u32), (F, i, a as u32)])?;
                out = out.add(&w.scale(&coeff));
            }
        }
    }
    Ok(out)
}

fn braid_relations(c: &mut Collector, grid: Grid) -> Result<(), Error> {
    use Sign::{Neg, Pos};
    for (n, m, space) in spaces(&[2, 3], grid, 2, 4)? {
        for total in totals(n, m, grid.max_total) {
            let key = |rel: String| format!("n={} m={} N={} {}", n, m, total, rel);
            let sp = &space;
            let id = diag(sp, total, |_| RingElem::one())?;
            let mut ops: BTreeMap<(usize, u8, i8), BlockOperator> = BTreeMap::new();
            for i in 1..m {
                for (bi, b) in [Braid::Tpp, Braid::Tp, Braid::T].into_iter().enumerate() {
                    for s in [Pos, Neg] {
                        ops.insert((i, bi as u8, s.as_i8()), braid_op(sp, total, b, i, s)?);
                    }
                }
            }
            let bix = |b: Braid| match b {
                Braid::Tpp => 0u8,
                Braid::Tp => 1,
                Braid::T => 2,
            };
            let op = |b: Braid, i: usize, s: Sign| &ops[&(i, bix(b), s.as_i8())];
            let e = |i: usize, k: u32| rung(sp, total, E, i, k);
            let f = |i: usize, k: u32| rung(sp, total, F, i, k);

            for i in 1..m {
                for b in [Braid::Tpp, Braid::Tp, Braid::T] {
                    let (p, q) = (op(b, i, Pos), op(b, i, Neg));
                    let d = op_diff(&p.then(q), &id).or_else(|| op_diff(&q.then(p), &id));
                    c.check(key(format!("{}_{i} inverse", b.name())), d);
                }
                let bar_tp = bar_tp_op(sp, total, i)?;
                let tpp = op(Braid::Tpp, i, Pos);
                let d = op_diff(&tpp.then(&bar_tp), &id).or_else(|| op_diff(&bar_tp.then(tpp), &id));
                c.check(key(format!("T''_{i} bar(T'_{i}) = 1")), d);

                let scale = diag(sp, total, |s| {
                    let l = s.lambda(i);
                    RingElem::signed_q_pow(l as i64, l)
                })?;
                c.check(key(format!("T''_{i} = (-1)^l q^l T'_{i}")), op_diff(tpp, &scale.then(op(Braid::Tp, i, Pos))));

                // Conjugation by T'' and T'. The weight in each coefficient is
                // read off the block where the conjugated generator acts.
                let lam_at = |s: &GlSequence, kind: Option<RungKind>| -> Option<i32> {
                    let sw = swap_adjacent(s, i);
                    match kind {
                        None => Some(sw.lambda(i)),
                        Some(k) => rung_target(&sw, k, i, 1).seq().map(|t| t.lambda(i)),
                    }
                };
                let coef = |kind: Option<RungKind>, sgn: i32| {
                    diag(sp, total, move |s| match lam_at(s, kind) {
                        Some(l) => -RingElem::q_pow(sgn * l),
                        None => RingElem::zero(),
                    })
                };
                let (ei, fi) = (e(i, 1)?, f(i, 1)?);
                let conj = |b: Braid, x: &BlockOperator| chain(&[op(b, i, Neg), x, op(b, i, Pos)]);
                let rhs = coef(None, -1)?.then(&fi);
                c.check(key(format!("T''_{i} E_{i} T''_{i}^-1 = -q^(-l) F_{i}")), op_diff(&conj(Braid::Tpp, &ei), &rhs));
                let rhs = coef(Some(F), 1)?.then(&ei);
                c.check(key(format!("T''_{i} F_{i} T''_{i}^-1 = -q^(l) E_{i}")), op_diff(&conj(Braid::Tpp, &fi), &rhs));
                let rhs = coef(Some(E), -1)?.then(&fi);
                c.check(key(format!("T'_{i} E_{i} T'_{i}^-1 = -q^(-l) F_{i}")), op_diff(&conj(Braid::Tp, &ei), &rhs));
                let rhs = coef(None, 1)?.then(&ei);
                c.check(key(format!("T'_{i} F_{i} T'_{i}^-1 = -q^(l) E_{i}")), op_diff(&conj(Braid::Tp, &fi), &rhs));
            }
            for i in 1..m {
                for j in i + 1..m {
                    for b in [Braid::Tpp, Braid::T] {
                        for s in [Pos, Neg] {
                            let sg = if s == Pos { "" } else { "^-1" };
                            if j == i + 1 {
                                let l = chain(&[op(b, i, s), op(b, j, s), op(b, i, s)]);
                                let r = chain(&[op(b, j, s), op(b, i, s), op(b, j, s)]);
                                c.check(key(format!("braid {}{sg} i={i} j={j}", b.name())), op_diff(&l, &r));
                            } else {
                                let l = chain(&[op(b, i, s), op(b, j, s)]);
                                let r = chain(&[op(b, j, s), op(b, i, s)]);
                                c.check(key(format!("commute {}{sg} i={i} j={j}", b.name())), op_diff(&l, &r));
                            }
                        }
                    }
                }
                if i + 1 < m {
                    let j = i + 1;
                    for b in [Braid::Tpp, Braid::T] {
                        for k in 1..=n {
                            let (ek, ej) = (e(i, k)?, e(j, k)?);
                            let l = chain(&[op(b, i, Neg), op(b, j, Neg), &ek, op(b, j, Pos), op(b, i, Pos)]);
                            c.check(
                                key(format!("{b}_{i}{b}_{j} E_{i}^({k}) ({b}_{i}{b}_{j})^-1 = E_{j}^({k})", b = b.name())),
                                op_diff(&l, &ej),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

// ---- web-relations -----------------------------------------------------------

/// Accumulates the first failing block across the blocks of one instance.
#[derive(Default)]
struct FirstDiff {
    checked: usize,
    diff: Option<String>,
}

impl FirstDiff {
    fn add(&mut self, ctx: impl FnOnce() -> String, lhs: &BlockOperator, rhs: &BlockOperator) {
        self.checked += 1;
        if self.diff.is_none() {
            if let Some(d) = op_diff(lhs, rhs) {
                self.diff = Some(format!("{}\n{}", ctx(), d));
            }
        }
    }

    fn emit(self, c: &mut Collector, key: String) {
        if self.checked > 0 {
            c.check(format!("{} ({} cases)", key, self.checked), self.diff);
        }
    }
}

fn web_relations(c: &mut Collector, grid: Grid) -> Result<(), Error> {
    for (n, m, space) in spaces(&[2, 3], grid, 2, 4)? {
        let ni = n as i32;
        for total in totals(n, m, grid.max_total) {
            let key = |rel: &str, i: usize| format!("n={} m={} N={} {} i={}", n, m, total, rel, i);
            let sp = &space;
            let blocks = sp.blocks_of_degree(total);
            for i in 1..m {
                let mut digon = FirstDiff::default();
                let mut digon_mirror = FirstDiff::default();
                let mut rdigon = FirstDiff::default();
                let mut rdigon_mirror = FirstDiff::default();
                let mut switch_ef = FirstDiff::default();
                let mut switch_fe = FirstDiff::default();
                for s in &blocks {
                    let (k, l) = (s.a(i), s.a(i + 1));
                    let id = ident_op(sp, s)?;
                    let ctx = |x: u32| move || format!("block {} label {}", s, x);
                    for x in 1..=n {
                        // A k+l strand split into k and l and merged again.
                        if l == 0 && x as i32 <= k {
                            let lhs = word_op(sp, s, &[(E, i, x), (F, i, x)])?;
                            digon.add(ctx(x), &lhs, &id.scale(&qbinom(k as i64, x)));
                        }
                        if k == 0 && x as i32 <= l {
                            let lhs = word_op(sp, s, &[(F, i, x), (E, i, x)])?;
                            digon_mirror.add(ctx(x), &lhs, &id.scale(&qbinom(l as i64, x)));
                        }
                        // A k strand next to an n strand: the reverse digon.
                        if l == ni && k + x as i32 <= ni {
                            let lhs = word_op(sp, s, &[(F, i, x), (E, i, x)])?;
                            rdigon.add(ctx(x), &lhs, &id.scale(&qbinom((ni - k) as i64, x)));
                        }
                        if k == ni && l + x as i32 <= ni {
                            let lhs = word_op(sp, s, &[(E, i, x), (F, i, x)])?;
                            rdigon_mirror.add(ctx(x), &lhs, &id.scale(&qbinom((ni - l) as i64, x)));
                        }
                    }
                    for r in 0..=n {
                        for t0 in 0..=n {
                            // E^(s) below F^(r), rewritten with F below E.
                            let lhs = word_op(sp, s, &[(E, i, t0), (F, i, r)])?;
                            let mut rhs = BlockOperator::zero();
                            for t in 0..=r.min(t0) {
                                let co = qbinom((k - l + r as i32 - t0 as i32) as i64, t);
                                rhs = rhs.add(&word_op(sp, s, &[(F, i, r - t), (E, i, t0 - t)])?.scale(&co));
                            }
                            switch_ef.add(|| format!("block {} E^({}) then F^({})", s, t0, r), &lhs, &rhs);
                            let lhs = word_op(sp, s, &[(F, i, t0), (E, i, r)])?;
                            let mut rhs = BlockOperator::zero();
                            for t in 0..=r.min(t0) {
                                let co = qbinom((l - k + r as i32 - t0 as i32) as i64, t);
                                rhs = rhs.add(&word_op(sp, s, &[(E, i, r - t), (F, i, t0 - t)])?.scale(&co));
                            }
                            switch_fe.add(|| format!("block {} F^({}) then E^({})", s, t0, r), &lhs, &rhs);
                        }
                    }
                }
                digon.emit(c, key("digon [k+l,l]", i));
                digon_mirror.emit(c, key("digon mirrored [k+l,l]", i));
                rdigon.emit(c, key("reverse digon [n-k,l]", i));
                rdigon_mirror.emit(c, key("reverse digon mirrored [n-k,l]", i));
                switch_ef.emit(c, key("square switch E below F", i));
                switch_fe.emit(c, key("square switch F below E", i));

                for kind in [E, F] {
                    let mut merge = FirstDiff::default();
                    for r in 1..=n {
                        for t in 1..=n - r {
                            let lhs = chain(&[&rung(sp, total, kind, i, r)?, &rung(sp, total, kind, i, t)?]);
                            let rhs = rung(sp, total, kind, i, r + t)?.scale(&qbinom((r + t) as i64, r));
                            merge.add(|| format!("{:?}^({}) then {:?}^({})", kind, r, kind, t), &lhs, &rhs);
                        }
                    }
                    merge.emit(c, key(&format!("rung merge {:?} [r+s,r]", kind), i));
                }

                if i + 1 < m {
                    let j = i + 1;
                    let mut assoc_e = FirstDiff::default();
                    let mut assoc_f = FirstDiff::default();
                    for s in blocks.iter().filter(|s| s.a(j) == 0) {
                        for a in 0..=n {
                            for b in 1..=n {
                                let lhs = word_op(sp, s, &[(E, i, a + b), (E, j, b)])?;
                                let rhs = word_op(sp, s, &[(E, i, b), (E, j, b), (E, i, a)])?;
                                assoc_e.add(|| format!("block {} split {}+{}", s, a, b), &lhs, &rhs);
                                let lhs = word_op(sp, s, &[(F, j, a + b), (F, i, b)])?;
                                let rhs = word_op(sp, s, &[(F, j, b), (F, i, b), (F, j, a)])?;
                                assoc_f.add(|| format!("block {} split {}+{}", s, a, b), &lhs, &rhs);
                            }
                        }
                    }
                    assoc_e.emit(c, key("associativity E", i));
                    assoc_f.emit(c, key("associativity F", i));
                }

                if n == 2 {
                    let mut circles = FirstDiff::default();
                    let mut digons = FirstDiff::default();
                    for s in &blocks {
                        let (k, l) = (s.a(i), s.a(i + 1));
                        let id = ident_op(sp, s)?;
                        if k == 2 && l == 0 {
                            let one = word_op(sp, s, &[(E, i, 1), (F, i, 1)])?;
                            circles.add(|| format!("1-circle on {}", s), &one, &id.scale(&qint(2)));
                            let two = word_op(sp, s, &[(E, i, 2), (F, i, 2)])?;
                            circles.add(|| format!("2-circle on {}", s), &two, &id);
                        }
                        if k == 1 && l == 2 {
                            let lhs = word_op(sp, s, &[(F, i, 1), (E, i, 1)])?;
                            digons.add(|| format!("digon on {}", s), &lhs, &id);
                        }
                    }
                    circles.emit(c, key("sl2 circles [2] and 1", i));
                    digons.emit(c, key("sl2 digon removal", i));
                    if i + 1 < m {
                        let j = i + 1;
                        let mut slide = FirstDiff::default();
                        for s in blocks.iter().filter(|s| s.a(i) == 2 && s.a(j) == 1 && s.a(j + 1) == 0) {
                            let lhs = word_op(sp, s, &[(E, j, 1), (E, i, 2), (E, j, 1)])?;
                            let rhs = word_op(sp, s, &[(E, i, 1), (E, j, 2), (E, i, 1)])?;
                            slide.add(|| format!("block {}", s), &lhs, &rhs);
                        }
                        slide.emit(c, key("sl2 doubled strand slide", i));
                    }
                }
            }
        }
    }
    Ok(())
}

// ---- reidemeister ------------------------------------------------------------

pub fn move_name(mv: Move) -> String {
    let sg = |s: Sign| if s == Sign::Pos { "+" } else { "-" };
    match mv {
        Move::R1(s) => format!("R1{}", sg(s)),
        Move::R2(s) => format!("R2{}", sg(s)),
        Move::R3(s) => format!("R3{}", sg(s)),
        Move::VertexSlide(k) => format!("vertex slide k={}", k),
        Move::VertexTwist(r) => format!("vertex twist r={}", r),
    }
}

fn reidemeister(c: &mut Collector, grid: Grid) -> Result<(), Error> {
    // The move grid reaches one size past the default grid.
    for (n, m, space) in spaces(&[2, 3], grid, 2, 5)? {
        let mut moves = vec![];
        for s in [Sign::Pos, Sign::Neg] {
            moves.extend([Move::R1(s), Move::R2(s), Move::R3(s)]);
        }
        moves.extend((1..=n).map(Move::VertexSlide));
        moves.extend((0..=n).map(Move::VertexTwist));
        for total in totals(n, m, grid.max_total) {
            let seqs = all_sequences(n, m, total);
            for &mv in &moves {
                let mut fd = FirstDiff::default();
                for s in &seqs {
                    for pos in 1..m {
                        let ctx = MoveContext { seq: s.clone(), pos };
                        let (d1, d2, coef) = match reidemeister_pair(mv, &ctx) {
                            Ok(x) => x,
                            Err(Error::InvalidContext(_)) => continue,
                            Err(e) => return Err(e),
                        };
                        let lhs = eval_matrix_in(&space, &d1)?;
                        let rhs = eval_matrix_in(&space, &d2)?.scale(&coef);
                        fd.add(|| format!("context {} at {}", s, pos), &lhs, &rhs);
                    }
                }
                fd.emit(c, format!("n={} m={} N={} {}", n, m, total, move_name(mv)));
            }
        }
    }
    Ok(())
}

// ---- twist -------------------------------------------------------------------

fn twist(c: &mut Collector) -> Result<(), Error> {
    for n in 2..=4u32 {
        let ni = n as i32;
        c.check(format!("n={} t_1 = -q^(-{})", n, n), scalar_diff(&full_twist(1, n), &-RingElem::q_pow(-ni)));
        let space = RepSpace::new(n, 3)?;
        for k in 1..=ni {
            let formula = RingElem::signed_q_pow(k as i64, -k * ni + k * (k - 1));
            c.check(format!("n={} k={} t_k = (-1)^k q^(-kn) q^(k(k-1))", n, k), scalar_diff(&full_twist(k, n), &formula));
            for (sign, h) in [(Sign::Pos, 2), (Sign::Neg, -2)] {
                let src = vec![k, 0, ni];
                let kink = LadderDiagram::new(
                    n,
                    src.clone(),
                    vec![Layer::RungF(2, k as u32), Layer::Crossing(1, sign), Layer::RungE(2, k as u32)],
                );
                let lhs = eval_matrix_in(&space, &kink)?;
                let expect = full_twist(k, n).pow((h / 2) as i64)?;
                let rhs = space.identity(&GlSequence::new(n, src))?.scale(&expect);
                c.check(format!("n={} k={} kink {} = t_k^({})", n, k, move_name(Move::R1(sign)), h / 2), op_diff(&lhs, &rhs));
            }
            for framing in [-2, -1, 1, 2] {
                let got = eval_closed_in(&RepSpace::new(n, 2)?, &unknot(n, k as u32, framing))?;
                let want = &qbinom(n as i64, k as u32) * &full_twist(k, n).pow(framing as i64)?;
                c.check(format!("n={} k={} unknot with {} full twists", n, k, framing), scalar_diff(&got, &want));
            }
            let half = &twist_coefficient(k, n, 1) * &twist_coefficient(k, n, 1);
            c.check(format!("n={} k={} two half twists = t_k", n, k), scalar_diff(&half, &full_twist(k, n)));
        }
        // A full twist inserted on one component of a Hopf link.
        for col in 1..=n.min(3) {
            let hopf = braid_closure(n, col, 2, &[(1, Sign::Pos), (1, Sign::Pos)])?;
            let sp = RepSpace::new(n, hopf.m)?;
            let base = eval_closed_in(&sp, &hopf)?;
            for h in [2, -2] {
                let mut twisted = hopf.clone();
                twisted.layers.insert(2, Layer::Twist(1, h));
                let got = eval_closed_in(&sp, &twisted)?;
                let want = &base * &full_twist(col as i32, n).pow((h / 2) as i64)?;
                c.check(format!("n={} color {} Hopf link with {} half twists", n, col, h), scalar_diff(&got, &want));
            }
        }
    }
    Ok(())
}

// ---- affine-relations ----------------------------------------------------------

fn affine_relations(c: &mut Collector, grid: Grid) -> Result<(), Error> {
    for (n, m, space) in spaces(&[2, 3], grid, 2, 4)? {
        for total in totals(n, m, grid.max_total.min(3)) {
            let key = |rel: String| format!("n={} m={} N={} {}", n, m, total, rel);
            let sp = &space;
            let e0 = |k: u32| affine_operator(sp, true, k, total);
            let f0 = |k: u32| affine_operator(sp, false, k, total);
            let (e01, f01) = (e0(1)?, f0(1)?);
            let zero = BlockOperator::zero();

            let lhs = f01.then(&e01).sub(&e01.then(&f01));
            let rhs = diag(sp, total, |s| qint((s.a(1) - s.a(m)) as i64))?;
            c.check(key("[E0,F0] = [l0]".into()), op_diff(&lhs, &rhs));

            for k in 2..=n {
                let pow_e = (1..k).fold(e01.clone(), |acc, _| acc.then(&e01));
                let pow_f = (1..k).fold(f01.clone(), |acc, _| acc.then(&f01));
                let fact = webskein_core::qfact(k);
                c.check(key(format!("E0^{k} = [{k}]! E0^({k})")), op_diff(&pow_e, &e0(k)?.scale(&fact)));
                c.check(key(format!("F0^{k} = [{k}]! F0^({k})")), op_diff(&pow_f, &f0(k)?.scale(&fact)));
            }

            for j in 1..m {
                let (ej, fj) = (rung(sp, total, E, j, 1)?, rung(sp, total, F, j, 1)?);
                let l = fj.then(&e01).sub(&e01.then(&fj));
                c.check(key(format!("[E0,F{j}] = 0")), op_diff(&l, &zero));
                let l = f01.then(&ej).sub(&ej.then(&f01));
                c.check(key(format!("[E{j},F0] = 0")), op_diff(&l, &zero));
            }

            let two = qint(2);
            if m == 2 {
                // Affine sl_2 has a_{01} = -2, so the Serre relations are cubic.
                for kind in [E, F] {
                    let x0 = |k: u32| if kind == E { e0(k) } else { f0(k) };
                    let x1 = |k: u32| rung(sp, total, kind, 1, k);
                    let mut a = BlockOperator::zero();
                    let mut b = BlockOperator::zero();
                    for r in 0..=3u32 {
                        let sg = RingElem::int(if r % 2 == 0 { 1 } else { -1 });
                        let (p, q) = (3 - r, r);
                        let ida = diag(sp, total, |_| RingElem::one())?;
                        let pick = |op: Result<BlockOperator, Error>, k: u32| if k == 0 { Ok(ida.clone()) } else { op };
                        a = a.add(&chain(&[&pick(x0(q), q)?, &x1(1)?, &pick(x0(p), p)?]).scale(&sg));
                        b = b.add(&chain(&[&pick(x1(q), q)?, &x0(1)?, &pick(x1(p), p)?]).scale(&sg));
                    }
                    c.check(key(format!("cubic serre {k:?}0 {k:?}0 {k:?}1", k = kind)), op_diff(&a, &zero));
                    c.check(key(format!("cubic serre {k:?}1 {k:?}1 {k:?}0", k = kind)), op_diff(&b, &zero));
                }
            } else {
                let mut adj = vec![1, m - 1];
                adj.dedup();
                for kind in [E, F] {
                    let x0 = if kind == E { &e01 } else { &f01 };
                    for &j in &adj {
                        let xj = rung(sp, total, kind, j, 1)?;
                        let a = chain(&[&xj, x0, x0]).add(&chain(&[x0, x0, &xj]));
                        let b = chain(&[x0, &xj, x0]).scale(&two);
                        c.check(key(format!("serre {k:?}0 {k:?}0 {k:?}{j}", k = kind)), op_diff(&a, &b));
                        let a = chain(&[x0, &xj, &xj]).add(&chain(&[&xj, &xj, x0]));
                        let b = chain(&[&xj, x0, &xj]).scale(&two);
                        c.check(key(format!("serre {k:?}{j} {k:?}{j} {k:?}0", k = kind)), op_diff(&a, &b));
                    }
                    for j in 2..m.saturating_sub(1) {
                        let xj = rung(sp, total, kind, j, 1)?;
                        c.check(
                            key(format!("commute {k:?}0 {k:?}{j}", k = kind)),
                            op_diff(&x0.then(&xj), &xj.then(x0)),
                        );
                    }
                }
            }

            // Under a = -q^{n+1} the affine generator is a monomial multiple of
            // F_1 conjugated by the braidings T_2 ... T_{m-1}.
            let mut fd = FirstDiff::default();
            let ni = n as i32;
            for s in sp.blocks_of_degree(total) {
                let (a1, am) = (s.a(1), s.a(m));
                let mut steps: Vec<(usize, Option<Sign>)> = (2..m).rev().map(|i| (i, Some(Sign::Neg))).collect();
                steps.push((1, None));
                steps.extend((2..m).map(|i| (i, Some(Sign::Pos))));
                let mut conj = sp.identity(&s)?;
                let mut cur = s.clone();
                for (i, sign) in steps {
                    let blk = match sign {
                        Some(sg) => t_block(sp, &cur, i, sg)?,
                        None => sp.divided_block(&cur, F, 1, 1)?,
                    };
                    match &blk.0 {
                        Object::Seq(t) => {
                            conj = conj.then(&BlockOperator::single(cur.clone(), t.clone(), blk.1.clone()));
                            cur = t.clone();
                        }
                        Object::Zero => {
                            conj = BlockOperator::zero();
                            break;
                        }
                    }
                }
                let mono = -RingElem::q_pow(ni + 1 - a1 - am);
                let blk = affine_block(sp, &s, true, 1)?;
                let filled = match &blk.0 {
                    Object::Seq(t) => BlockOperator::single(
                        s.clone(),
                        t.clone(),
                        blk.1.try_map(|x| specialize_params(x, n, EvalParams::Filled))?,
                    ),
                    Object::Zero => BlockOperator::zero(),
                };
                fd.add(|| format!("block {}", s), &filled, &conj.scale(&mono));
                let half = [
                    twist_coefficient(a1, n, 1),
                    twist_coefficient(a1 + 1, n, -1),
                    twist_coefficient(am, n, -1),
                    twist_coefficient(am - 1, n, 1),
                ]
                .iter()
                .fold(RingElem::one(), |acc, x| &acc * x);
                let as_op = |x: &RingElem| BlockOperator::single(s.clone(), s.clone(), SparseMatrix::identity(1).scale(x));
                fd.add(|| format!("half twists for a1={} am={}", a1, am), &as_op(&half), &as_op(&mono));
            }
            fd.emit(c, key("filled E0 = -q^(n+1-a1-am) T F1 T^-1".into()));
        }
    }
    Ok(())
}

// ---- bracket-form ------------------------------------------------------------

fn bracket_form(c: &mut Collector, grid: Grid) -> Result<(), Error> {
    for n in [2u32, 3] {
        for m in 3..=grid.max_m.min(4) {
            for total in totals(n, m, grid.max_total) {
                let r = bracket_form_check(m, n, total)?;
                let diff = r.failures.first().map(|(s, why)| format!("block {}\n{}", s, why));
                c.check(format!("n={} m={} N={} nested brackets ({} blocks)", n, m, total, r.blocks_checked), diff);
            }
        }
    }
    Ok(())
}

// ---- moy-soundness -------------------------------------------------------------

/// A random closed crossingless word: a random walk away from an extremal
/// source followed by a random walk back to it.
pub fn random_closed_word(rng: &mut StdRng, n: u32, m: usize, max_total: i32) -> (GlSequence, Vec<(RungKind, usize, u32)>) {
    let ni = n as i32;
    let source = loop {
        let entries: Vec<i32> = (0..m).map(|_| if rng.gen_bool(0.5) { ni } else { 0 }).collect();
        let t: i32 = entries.iter().sum();
        if t > 0 && t <= max_total {
            break GlSequence::new(n, entries);
        }
    };
    let mut cur = source.clone();
    let mut walk = Vec::new();
    let len = rng.gen_range(1..=5);
    for _ in 0..100 {
        if walk.len() == len {
            break;
        }
        let kind = if rng.gen_bool(0.5) { E } else { F };
        let i = rng.gen_range(1..m);
        let k = rng.gen_range(1..=n);
        if let Object::Seq(t) = rung_target(&cur, kind, i, k as i32) {
            walk.push((kind, i, k));
            cur = t;
        }
    }
    // Prefix sums of `cur - source` say which rungs carry labels back.
    let mut items = walk.clone();
    for _ in 0..200 {
        if cur == source {
            return (source, items);
        }
        let diffs: Vec<(usize, i32)> = (1..m)
            .map(|i| (i, (1..=i).map(|j| cur.a(j) - source.a(j)).sum::<i32>()))
            .filter(|&(_, d)| d != 0)
            .collect();
        let (i, d) = diffs[rng.gen_range(0..diffs.len())];
        let kind = if d > 0 { E } else { F };
        let k = rng.gen_range(1..=d.unsigned_abs());
        if let Object::Seq(t) = rung_target(&cur, kind, i, k as i32) {
            items.push((kind, i, k));
            cur = t;
        }
    }
    let mut items = walk.clone();
    items.extend(walk.iter().rev().map(|&(kind, i, k)| (kind.opposite(), i, k)));
    (source, items)
}

pub fn render_word(items: &[(RungKind, usize, u32)]) -> String {
    items.iter().map(|(k, i, x)| format!("{:?}{}^({})", k, i, x)).collect::<Vec<_>>().join(" ")
}

fn moy_soundness(c: &mut Collector, grid: Grid, samples: usize, seed: u64) -> Result<(), Error> {
    let mut rng = StdRng::seed_from_u64(seed);
    let max_m = grid.max_m.clamp(2, 4);
    let max_total = grid.max_total.clamp(2, 4);
    let mut spaces: BTreeMap<(u32, usize), RepSpace> = BTreeMap::new();
    for ix in 0..samples {
        let n = rng.gen_range(2..=3u32.min(max_total.max(2) as u32));
        let m = rng.gen_range(2..=max_m);
        let (source, items) = random_closed_word(&mut rng, n, m, max_total);
        let space = match spaces.entry((n, m)) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(RepSpace::new(n, m)?),
        };
        let layers = items
            .iter()
            .map(|&(k, i, x)| if k == E { Layer::RungE(i, x) } else { Layer::RungF(i, x) })
            .collect();
        let d = LadderDiagram::new(n, source.entries.clone(), layers);
        let matrix = eval_closed_in(space, &d)?;
        let key = format!("#{:03} n={} source {} word {}", ix, n, source, render_word(&items));
        match reduce(&RungWord { source, items, coefficient: RingElem::one() }) {
            Reduction::Scalar(x) => c.check(key, scalar_diff(&x, &matrix).map(|d| format!("reduced vs matrix\n{}", d))),
            Reduction::Stuck { residual, .. } => c.partial(
                key,
                format!("stuck on {} word(s), first {}", residual.len(), render_word(&residual[0].items)),
            ),
        }
    }
    Ok(())
}
