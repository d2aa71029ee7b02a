//! Finite orthocomplemented semilattices as models of the calculus.

use std::collections::BTreeMap;

use crate::error::OrderError;
use crate::order::{enumerate_partial_orders, Elem, EntailmentRelation, FiniteStructure, PreorderedSet};

use super::formula::{OrthoFormula, Sequent};

/// Evaluates `f` with primes through `assignment`, meets and negations
/// through the tables of `model`.
pub fn eval_in_model(
    model: &FiniteStructure,
    base: &PreorderedSet,
    assignment: &BTreeMap<Elem, usize>,
    f: &OrthoFormula,
) -> Result<usize, OrderError> {
    match f {
        OrthoFormula::Prime(e) => assignment
            .get(e)
            .copied()
            .ok_or_else(|| OrderError::IncompleteAssignment(base.name(*e).to_string())),
        OrthoFormula::Meet(a, b) => {
            let x = eval_in_model(model, base, assignment, a)?;
            let y = eval_in_model(model, base, assignment, b)?;
            Ok(model.meet_of(x, y))
        }
        OrthoFormula::Neg(a) => {
            let x = eval_in_model(model, base, assignment, a)?;
            Ok(model.neg.as_ref().expect("model has negation")[x])
        }
    }
}

/// Whether the meet of the left side lies below the right side in `model`.
pub fn sequent_holds(
    model: &FiniteStructure,
    base: &PreorderedSet,
    assignment: &BTreeMap<Elem, usize>,
    s: &Sequent,
) -> Result<bool, OrderError> {
    let mut acc = model.one.expect("bounded model");
    for a in &s.lhs {
        acc = model.meet_of(acc, eval_in_model(model, base, assignment, a)?);
    }
    Ok(model.leq(acc, eval_in_model(model, base, assignment, &s.rhs)?))
}

/// Every bounded semilattice with orthocomplement on `1..=max_size` labelled
/// points.
pub fn ortho_models(max_size: usize) -> Vec<FiniteStructure> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        for order in enumerate_partial_orders(n) {
            let Some(s) = FiniteStructure::numbered(order)
                .with_meets()
                .and_then(FiniteStructure::with_orthocomplement)
            else {
                continue;
            };
            if s.zero.is_some() && s.one.is_some() {
                out.push(s);
            }
        }
    }
    out
}

/// Assignments of the base into `model` sending the bounds to the bounds and
/// respecting the relation: `S |- b` forces `meet v(S) <= v(b)` for every
/// nonempty set `S` of base elements.
pub fn compatible_assignments(model: &FiniteStructure, rel: &EntailmentRelation) -> Vec<BTreeMap<Elem, usize>> {
    let base = rel.base();
    let n = base.len();
    let size = model.len();
    let (Some(bottom), Some(top)) = (model.zero, model.one) else {
        return Vec::new();
    };
    let mut constraints = Vec::new();
    for mask in 1u32..(1 << n) {
        let set: Vec<Elem> = (0..n).filter(|i| mask >> i & 1 == 1).map(Elem).collect();
        for b in base.elements() {
            if rel.entails_one(&set, b) {
                constraints.push((set.clone(), b));
            }
        }
    }
    let mut out = Vec::new();
    let mut image = vec![0usize; n];
    let total = (size as u64).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for slot in image.iter_mut() {
            *slot = (c % size as u64) as usize;
            c /= size as u64;
        }
        if base.zero().is_some_and(|z| image[z.0] != bottom) || base.one().is_some_and(|o| image[o.0] != top) {
            continue;
        }
        let ok = constraints.iter().all(|(set, b)| {
            let m = set.iter().map(|e| image[e.0]).reduce(|x, y| model.meet_of(x, y)).expect("nonempty");
            model.leq(m, image[b.0])
        });
        if ok {
            out.push(base.elements().map(|e| (e, image[e.0])).collect());
        }
    }
    out
}
