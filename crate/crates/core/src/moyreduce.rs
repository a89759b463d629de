//! Word-level reduction of crossingless ladders by web relations.
//!
//! This evaluator never touches the representation. It rewrites rung words
//! with the merge, commutation and square-switch relations until every term
//! is either killed by an inadmissible label or becomes an identity word.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::braiding::smooth_crossing;
use crate::coeffring::{qbinom, RingElem};
use crate::ladder::{eval_closed_in, twist_coefficient, Layer, LadderDiagram};
use crate::repcore::RepSpace;
use crate::weights::{rung_target, GlSequence, Object, RungKind};
use crate::Error;

pub type Rung = (RungKind, usize, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RungWord {
    pub source: GlSequence,
    /// Rungs in application order.
    pub items: Vec<Rung>,
    pub coefficient: RingElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Scalar(RingElem),
    /// Words the strategy could not finish, with the partial scalar collected
    /// from the terms that did finish.
    Stuck { partial: RingElem, residual: Vec<RungWord> },
}

/// Sequences before and after each rung, or `None` if some step is zero.
fn running(source: &GlSequence, items: &[Rung]) -> Option<Vec<GlSequence>> {
    let mut out = vec![source.clone()];
    let mut cur = source.clone().into_object();
    for &(kind, i, k) in items {
        let Object::Seq(s) = &cur else { return None };
        cur = rung_target(s, kind, i, k as i32);
        out.push(cur.seq()?.clone());
    }
    Some(out)
}

/// Rungs at distant positions, or of opposite kinds at different positions.
fn commutes(x: Rung, y: Rung) -> bool {
    x.1.abs_diff(y.1) >= 2 || (x.1 != y.1 && x.0 != y.0)
}

fn kills_forward(s: &GlSequence, r: Rung) -> bool {
    rung_target(s, r.0, r.1, r.2 as i32).is_zero()
}

/// True if no admissible sequence maps to `t` under `r`.
fn kills_backward(t: &GlSequence, r: Rung) -> bool {
    rung_target(t, r.0.opposite(), r.1, r.2 as i32).is_zero()
}

/// Rewrites `[x, y]` (x applied first, at weight `lam`) as a combination of
/// `[y', x']`. `None` when the pair is blocked.
fn swap_pair(x: Rung, y: Rung, lam: i32) -> Option<Vec<(RingElem, Vec<Rung>)>> {
    let (xk, xi, xr) = x;
    let (yk, yi, yr) = y;
    if xi.abs_diff(yi) >= 2 || (xi != yi && xk != yk) {
        return Some(vec![(RingElem::one(), vec![y, x])]);
    }
    if xi != yi || xk == yk {
        return None;
    }
    let mut out = Vec::new();
    for t in 0..=xr.min(yr) {
        let p = match xk {
            // E^{(r)} F^{(s)} 1_λ = Σ_t [r-s+λ, t] F^{(s-t)} E^{(r-t)} 1_λ
            RungKind::F => yr as i64 - xr as i64 + lam as i64,
            // F^{(s)} E^{(r)} 1_λ = Σ_t [s-r-λ, t] E^{(r-t)} F^{(s-t)} 1_λ
            RungKind::E => yr as i64 - xr as i64 - lam as i64,
        };
        let c = qbinom(p, t);
        if c.is_zero() {
            continue;
        }
        let mut items = Vec::new();
        if yr > t {
            items.push((yk, yi, yr - t));
        }
        if xr > t {
            items.push((xk, xi, xr - t));
        }
        out.push((c, items));
    }
    Some(out)
}

enum Step {
    Done,
    Rewrite(Vec<(RingElem, Vec<Rung>)>),
    Stuck,
}

fn step(source: &GlSequence, items: &[Rung]) -> Step {
    let Some(seqs) = running(source, items) else {
        return Step::Rewrite(Vec::new());
    };
    if items.is_empty() {
        return Step::Done;
    }
    for p in 0..items.len() {
        if items[p].2 == 0 {
            let mut v = items.to_vec();
            v.remove(p);
            return Step::Rewrite(vec![(RingElem::one(), v)]);
        }
    }
    for p in 0..items.len() - 1 {
        let (x, y) = (items[p], items[p + 1]);
        if x.0 == y.0 && x.1 == y.1 {
            let mut v = items.to_vec();
            v[p] = (x.0, x.1, x.2 + y.2);
            v.remove(p + 1);
            return Step::Rewrite(vec![(qbinom((x.2 + y.2) as i64, x.2), v)]);
        }
    }
    // A rung that would kill the source is pushed down one place.
    for p in 1..items.len() {
        if !kills_forward(source, items[p]) {
            continue;
        }
        let passable = (0..p).all(|q| swap_pair(items[q], items[p], 0).is_some());
        if !passable {
            continue;
        }
        let lam = seqs[p - 1].lambda(items[p].1);
        let swapped = swap_pair(items[p - 1], items[p], lam).unwrap();
        return Step::Rewrite(splice(items, p - 1, swapped));
    }
    let target = seqs.last().unwrap();
    let last = items.len() - 1;
    for p in (0..last).rev() {
        if !kills_backward(target, items[p]) {
            continue;
        }
        let passable = (p + 1..=last).all(|q| swap_pair(items[p], items[q], 0).is_some());
        if !passable {
            continue;
        }
        let lam = seqs[p].lambda(items[p].1);
        let swapped = swap_pair(items[p], items[p + 1], lam).unwrap();
        return Step::Rewrite(splice(items, p, swapped));
    }
    // An E applied before an F at the same position is switched.
    for p in 0..last {
        let (x, y) = (items[p], items[p + 1]);
        if x.0 == RungKind::E && y.0 == RungKind::F && x.1 == y.1 {
            let lam = seqs[p].lambda(x.1);
            return Step::Rewrite(splice(items, p, swap_pair(x, y, lam).unwrap()));
        }
    }
    // Otherwise gather the nearest such pair: the E moves up past rungs it
    // commutes with, the F moves down past the rest.
    for p in 0..last {
        if items[p].0 != RungKind::E {
            continue;
        }
        let i = items[p].1;
        let Some(q) = (p + 1..=last).find(|&q| items[q].1 == i) else {
            continue;
        };
        if items[q].0 != RungKind::F {
            continue;
        }
        let mut a = p;
        while a + 1 < q && commutes(items[p], items[a + 1]) {
            a += 1;
        }
        if (a + 1..q).all(|r| commutes(items[r], items[q])) {
            let mut v = items[..p].to_vec();
            v.extend_from_slice(&items[p + 1..=a]);
            v.push(items[p]);
            v.push(items[q]);
            v.extend_from_slice(&items[a + 1..q]);
            v.extend_from_slice(&items[q + 1..]);
            return Step::Rewrite(vec![(RingElem::one(), v)]);
        }
    }
    Step::Stuck
}

fn splice(items: &[Rung], at: usize, pairs: Vec<(RingElem, Vec<Rung>)>) -> Vec<(RingElem, Vec<Rung>)> {
    pairs
        .into_iter()
        .map(|(c, mid)| {
            let mut v = items[..at].to_vec();
            v.extend(mid);
            v.extend_from_slice(&items[at + 2..]);
            (c, v)
        })
        .collect()
}

/// One step of the strategy used by [`reduce`]. `None` for an identity word
/// or a stuck one; otherwise the terms whose sum equals `w`.
pub fn rewrite_step(w: &RungWord) -> Option<Vec<RungWord>> {
    match step(&w.source, &w.items) {
        Step::Done | Step::Stuck => None,
        Step::Rewrite(next) => Some(
            next.into_iter()
                .map(|(c, items)| RungWord { source: w.source.clone(), items, coefficient: &w.coefficient * &c })
                .collect(),
        ),
    }
}

/// Greedy reduction. Each derivation branch may take at most `10·len²`
/// rewrite steps, `len` being the original word length.
pub fn reduce(w: &RungWord) -> Reduction {
    let budget = 10 * w.items.len() * w.items.len();
    let mut scalar = RingElem::zero();
    let mut residual: BTreeMap<Vec<Rung>, RingElem> = BTreeMap::new();
    let mut work: Vec<(RingElem, Vec<Rung>, usize)> = vec![(w.coefficient.clone(), w.items.clone(), 0)];
    while let Some((c, items, depth)) = work.pop() {
        match step(&w.source, &items) {
            Step::Done => scalar += &c,
            Step::Stuck => *residual.entry(items).or_insert_with(RingElem::zero) += &c,
            Step::Rewrite(_) if depth >= budget => {
                *residual.entry(items).or_insert_with(RingElem::zero) += &c;
            }
            Step::Rewrite(next) => {
                for (c2, it) in next {
                    work.push((&c * &c2, it, depth + 1));
                }
            }
        }
    }
    let residual: Vec<RungWord> = residual
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(items, coefficient)| RungWord { source: w.source.clone(), items, coefficient })
        .collect();
    if residual.is_empty() {
        Reduction::Scalar(scalar)
    } else {
        Reduction::Stuck { partial: scalar, residual }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossCheck {
    Agree(RingElem),
    Disagree { matrix: RingElem, reduced: RingElem },
    Partial { matrix: RingElem, stuck: Vec<RungWord> },
}

/// Expands every crossing and twist of a linear diagram into rung words with
/// coefficients, dropping terms that pass through the zero object.
pub fn expand_crossings(d: &LadderDiagram) -> Result<BTreeMap<Vec<Rung>, RingElem>, Error> {
    d.validate()?;
    let mut out: BTreeMap<Vec<Rung>, RingElem> = BTreeMap::new();
    if !d.source.is_admissible() {
        return Ok(out);
    }
    let mut states: BTreeMap<Vec<Rung>, (GlSequence, RingElem)> = BTreeMap::new();
    states.insert(Vec::new(), (d.source.clone(), RingElem::one()));
    for layer in &d.layers {
        let mut next: BTreeMap<Vec<Rung>, (GlSequence, RingElem)> = BTreeMap::new();
        for (items, (seq, c)) in states {
            let mut push = |extra: &[Rung], coeff: RingElem| {
                let Some(seqs) = running(&seq, extra) else { return };
                let mut v = items.clone();
                v.extend(extra.iter().copied().filter(|r| r.2 > 0));
                let e = next.entry(v).or_insert_with(|| (seqs.last().unwrap().clone(), RingElem::zero()));
                e.1 += &coeff;
            };
            match *layer {
                Layer::RungE(i, k) => push(&[(RungKind::E, i, k)], c.clone()),
                Layer::RungF(i, k) => push(&[(RungKind::F, i, k)], c.clone()),
                Layer::Twist(i, h) => push(&[], &c * &twist_coefficient(seq.a(i), d.n, h)),
                Layer::Crossing(i, sign) => {
                    for t in smooth_crossing(d.n, seq.a(i) as u32, seq.a(i + 1) as u32, sign) {
                        push(&t.rungs(i), &c * &t.coeff);
                    }
                }
                _ => return Err(Error::Precondition(alloc::string::String::from("annular layer in crosscheck"))),
            }
        }
        next.retain(|_, (_, c)| !c.is_zero());
        states = next;
    }
    for (items, (_, c)) in states {
        out.insert(items, c);
    }
    Ok(out)
}

/// Compares the matrix evaluation of a closed diagram with the reduction of
/// its smoothed rung words.
pub fn crosscheck_in(space: &RepSpace, d: &LadderDiagram) -> Result<CrossCheck, Error> {
    let matrix = eval_closed_in(space, d)?;
    let mut total = RingElem::zero();
    let mut stuck = Vec::new();
    for (items, coefficient) in expand_crossings(d)? {
        match reduce(&RungWord { source: d.source.clone(), items, coefficient }) {
            Reduction::Scalar(x) => total += &x,
            Reduction::Stuck { partial, residual } => {
                total += &partial;
                stuck.extend(residual);
            }
        }
    }
    Ok(if !stuck.is_empty() {
        CrossCheck::Partial { matrix, stuck }
    } else if total == matrix {
        CrossCheck::Agree(matrix)
    } else {
        CrossCheck::Disagree { matrix, reduced: total }
    })
}

pub fn crosscheck(d: &LadderDiagram) -> Result<CrossCheck, Error> {
    crosscheck_in(&RepSpace::new(d.n, d.m)?, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qint;
    use RungKind::{E, F};

    fn word(n: u32, src: &[i32], items: &[Rung]) -> RungWord {
        RungWord { source: GlSequence::new(n, src.to_vec()), items: items.to_vec(), coefficient: RingElem::one() }
    }

    #[test]
    fn circle() {
        assert_eq!(reduce(&word(2, &[2, 0], &[(E, 1, 1), (F, 1, 1)])), Reduction::Scalar(qint(2)));
    }

    #[test]
    fn reverse_digon() {
        let w = word(3, &[1, 3], &[(F, 1, 1), (E, 1, 1)]);
        assert_eq!(reduce(&w), Reduction::Scalar(qint(2)));
        let w = word(3, &[0, 3], &[(F, 1, 1), (E, 1, 1)]);
        assert_eq!(reduce(&w), Reduction::Scalar(qint(3)));
    }

    #[test]
    fn theta() {
        let w = word(3, &[0, 3, 0], &[(F, 1, 1), (E, 2, 1), (F, 2, 1), (E, 1, 1)]);
        assert_eq!(reduce(&w), Reduction::Scalar(&qint(2) * &qint(3)));
    }

    #[test]
    fn blocked_word_is_stuck() {
        let w = word(2, &[1, 1, 0], &[(E, 1, 1), (E, 2, 1)]);
        assert!(matches!(reduce(&w), Reduction::Stuck { .. }));
    }
}
