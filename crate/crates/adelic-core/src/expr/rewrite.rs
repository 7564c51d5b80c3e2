use super::{FamilyConstraint, PrimeSlot, RingExpr};

/// Normalize an expression under the carrier rewrite rules:
/// nested localizations compose to the smaller prime, completion at the
/// generic point is the identity, completion is idempotent, localization
/// after completion at a closed point is absorbed, and chain constraints
/// at the zero ideal are elided. Returns the normal form.
pub fn normalize(expr: &RingExpr) -> RingExpr {
    rewrite_steps(expr).0
}

/// Normalize and report how many rewrite steps fired. Each step strictly
/// decreases the tree size or the family constraint count, so the count is
/// bounded by the input measure.
pub fn rewrite_steps(expr: &RingExpr) -> (RingExpr, usize) {
    let mut current = expr.clone();
    let mut steps = 0;
    loop {
        let (next, fired) = pass(&current, false);
        steps += fired;
        if fired == 0 {
            return (current, steps);
        }
        current = next;
    }
}

/// One bottom-up pass. `var_closed` records whether the family variable of
/// the nearest enclosing product ranges over closed points, which licenses
/// the absorption of a localization after a completion at the variable.
fn pass(expr: &RingExpr, var_closed: bool) -> (RingExpr, usize) {
    match expr {
        RingExpr::Base(_) => (expr.clone(), 0),
        RingExpr::Localize(child, slot) => {
            let (child, n) = pass(child, var_closed);
            // localize o localize composes to the smaller prime
            if let (PrimeSlot::Fixed(p), RingExpr::Localize(inner, PrimeSlot::Fixed(q))) =
                (slot, &child)
            {
                if q.contains_prime(p) {
                    return (
                        RingExpr::Localize(inner.clone(), PrimeSlot::Fixed(p.clone())),
                        n + 1,
                    );
                }
                if p.contains_prime(q) {
                    return (
                        RingExpr::Localize(inner.clone(), PrimeSlot::Fixed(q.clone())),
                        n + 1,
                    );
                }
            }
            // repeated localization at the family variable
            if let (PrimeSlot::Var, RingExpr::Localize(_, PrimeSlot::Var)) = (slot, &child) {
                return (child.clone(), n + 1);
            }
            // localize at m after complete at m is absorbed for m closed
            if let (PrimeSlot::Fixed(p), RingExpr::Complete(_, PrimeSlot::Fixed(q))) =
                (slot, &child)
            {
                let maximal = q.height == q.ring.dimension();
                if maximal && p == q {
                    return (child.clone(), n + 1);
                }
            }
            if let (PrimeSlot::Var, RingExpr::Complete(_, PrimeSlot::Var)) = (slot, &child) {
                if var_closed {
                    return (child.clone(), n + 1);
                }
            }
            (RingExpr::Localize(Box::new(child), slot.clone()), n)
        }
        RingExpr::Complete(child, slot) => {
            let (child, n) = pass(child, var_closed);
            // completion at the generic point is the identity
            if let PrimeSlot::Fixed(p) = slot {
                if p.is_zero_ideal() {
                    return (child, n + 1);
                }
            }
            // completion is idempotent at a fixed prime or the variable
            match (slot, &child) {
                (PrimeSlot::Fixed(p), RingExpr::Complete(_, PrimeSlot::Fixed(q))) if p == q => {
                    return (child.clone(), n + 1);
                }
                (PrimeSlot::Var, RingExpr::Complete(_, PrimeSlot::Var)) => {
                    return (child.clone(), n + 1);
                }
                _ => {}
            }
            (RingExpr::Complete(Box::new(child), slot.clone()), n)
        }
        RingExpr::FiniteProduct(children) => {
            let mut total = 0;
            let out: Vec<RingExpr> = children
                .iter()
                .map(|c| {
                    let (c, n) = pass(c, var_closed);
                    total += n;
                    c
                })
                .collect();
            (RingExpr::FiniteProduct(out), total)
        }
        RingExpr::FamilyProduct { family, template } => {
            let closed = family.dim == 0;
            let (t, mut n) = pass(template, closed);
            let mut family = family.clone();
            // every nonzero prime strictly contains the zero ideal
            if matches!(&family.constraint, FamilyConstraint::Under(c) if c.is_zero_ideal()) {
                family.constraint = FamilyConstraint::None;
                n += 1;
            }
            (
                RingExpr::FamilyProduct {
                    family,
                    template: Box::new(t),
                },
                n,
            )
        }
    }
}
