//! Sign data solving the product relation in `WC_n` for given permutations.
//!
//! With the permutations fixed, the sign vector of the relation residual is
//! linear in the signs of the generators, and so is the ramification of
//! `C~ → C` over each point of `C`.

use rand::Rng;

use super::{signed_relation_residual, BaseCurve, FiberPoint, SignedTower};
use crate::error::{Error, Result};
use crate::f2::linalg::{solve, AffineSolution, BitRow};
use crate::perm::Perm;
use crate::weyl::SignedPerm;

/// Prescribed branching of `C~ → C` over a point of `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignConstraint {
    pub point: FiberPoint,
    pub ramified: bool,
}

fn assemble(n: usize, perms: &[Perm], x: &BitRow) -> Vec<SignedPerm> {
    perms
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let eps = (0..n).fold(0u64, |m, i| m | (u64::from(x.get(k * n + i)) << i));
            SignedPerm::new(p.clone(), eps).expect("mask fits")
        })
        .collect()
}

/// All sign assignments making `(handles, branches)` a tower and meeting the
/// constraints, as an affine space over `F₂`; variable `k n + i` is the sign
/// of letter `i` in generator `k` (handles first).
pub fn sign_solutions(
    base: &BaseCurve,
    handles: &[Perm],
    branches: &[Perm],
    constraints: &[SignConstraint],
) -> Result<Option<AffineSolution>> {
    let n = branches.first().or(handles.first()).map_or(0, Perm::degree);
    if n == 0 || n > 63 {
        return Err(Error::DegreeMismatch(format!("cannot solve signs in degree {n}")));
    }
    if handles.len() != 2 * base.genus() || branches.len() != base.label_count() {
        return Err(Error::DegreeMismatch("generator count does not match base".into()));
    }
    let perms: Vec<Perm> = handles.iter().chain(branches).cloned().collect();
    let nvars = perms.len() * n;
    let h = handles.len();
    let residual_eps = |x: &BitRow| {
        let signed = assemble(n, &perms, x);
        signed_relation_residual(n, &signed[..h], &signed[h..]).eps()
    };
    let mut rows = vec![BitRow::zeros(nvars); n];
    for v in 0..nvars {
        let mut x = BitRow::zeros(nvars);
        x.set(v, true);
        let col = residual_eps(&x);
        for (i, row) in rows.iter_mut().enumerate() {
            if (col >> i) & 1 == 1 {
                row.set(v, true);
            }
        }
    }
    let mut rhs = vec![false; n];
    for c in constraints {
        let cycles = branches
            .get(c.point.label)
            .ok_or_else(|| Error::Precondition(format!("no branch label {}", c.point.label)))?
            .cycles();
        let cyc = cycles
            .get(c.point.cycle)
            .ok_or_else(|| Error::Precondition(format!("no point {} over label {}", c.point.cycle, c.point.label)))?;
        let mut row = BitRow::zeros(nvars);
        for &i in cyc {
            row.set((h + c.point.label) * n + i, true);
        }
        rows.push(row);
        rhs.push(c.ramified);
    }
    Ok(solve(&rows, &rhs, nvars))
}

/// Constraints making `C~ → C` unramified everywhere.
pub fn etale_constraints(branches: &[Perm]) -> Vec<SignConstraint> {
    let mut out = Vec::new();
    for (label, p) in branches.iter().enumerate() {
        for cycle in 0..p.cycles().len() {
            out.push(SignConstraint { point: FiberPoint::new(label, cycle), ramified: false });
        }
    }
    out
}

/// A uniformly random tower on the given permutations meeting the constraints.
pub fn random_signs<R: Rng + ?Sized>(
    rng: &mut R,
    base: &BaseCurve,
    handles: &[Perm],
    branches: &[Perm],
    constraints: &[SignConstraint],
) -> Result<Option<SignedTower>> {
    let Some(sol) = sign_solutions(base, handles, branches, constraints)? else {
        return Ok(None);
    };
    let mut x = sol.particular.clone();
    for k in &sol.kernel {
        if rng.gen::<bool>() {
            x.xor_with(k);
        }
    }
    let n = branches.first().or(handles.first()).map_or(0, Perm::degree);
    let perms: Vec<Perm> = handles.iter().chain(branches).cloned().collect();
    let signed = assemble(n, &perms, &x);
    let h = handles.len();
    SignedTower::new(base.clone(), n, signed[..h].to_vec(), signed[h..].to_vec()).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solutions_satisfy_relation_and_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = Perm::parse("(1 2)", 3).unwrap();
        let u = Perm::parse("(2 3)", 3).unwrap();
        let branches = vec![t.clone(), t, u.clone(), u];
        let base = BaseCurve::numbered(0, 4);
        let etale = etale_constraints(&branches);
        for _ in 0..20 {
            let tower = random_signs(&mut rng, &base, &[], &branches, &etale).unwrap().unwrap();
            assert!(tower.is_etale_double());
        }
        let ram = [SignConstraint { point: FiberPoint::new(0, 1), ramified: true }];
        let tower = random_signs(&mut rng, &base, &[], &branches, &ram).unwrap().unwrap();
        assert!(tower.ramified_points().contains(&FiberPoint::new(0, 1)));
        // total ramification of a double cover is even
        let odd = [
            SignConstraint { point: FiberPoint::new(0, 1), ramified: true },
            SignConstraint { point: FiberPoint::new(1, 0), ramified: false },
            SignConstraint { point: FiberPoint::new(1, 1), ramified: false },
            SignConstraint { point: FiberPoint::new(2, 0), ramified: false },
            SignConstraint { point: FiberPoint::new(2, 1), ramified: false },
            SignConstraint { point: FiberPoint::new(3, 0), ramified: false },
            SignConstraint { point: FiberPoint::new(3, 1), ramified: false },
            SignConstraint { point: FiberPoint::new(0, 0), ramified: false },
        ];
        assert!(sign_solutions(&base, &[], &branches, &odd).unwrap().is_none());
    }

    #[test]
    fn etale_solution_count_over_rational_base() {
        // 2^(2g) étale double covers of the genus-2 curve C, each realized by
        // 2^(n-1) sign vectors differing by sign-flip relabelings
        let t = Perm::parse("(1 2)", 2).unwrap();
        let branches = vec![t; 6];
        let base = BaseCurve::numbered(0, 6);
        let sol = sign_solutions(&base, &[], &branches, &etale_constraints(&branches)).unwrap().unwrap();
        assert_eq!(sol.kernel.len(), 5);
    }
}
