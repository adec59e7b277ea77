//! Seeded random structures in `C_0` and random free amalgams.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::amalgam::free_amalgam;
use crate::classes::{in_c0, Verdict};
use crate::error::{Error, Result};
use crate::predim::is_self_sufficient;
use crate::structure::{FiniteStructure, Signature};

/// All `r`-subsets of `0..order` that contain at least one id `>= fresh`.
fn tuples(order: u32, r: usize, fresh: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: u32, order: u32, r: usize, fresh: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r {
            if cur.iter().any(|&v| v >= fresh) {
                out.push(cur.clone());
            }
            return;
        }
        for v in start..order {
            cur.push(v);
            go(v + 1, order, r, fresh, cur, out);
            cur.pop();
        }
    }
    go(0, order, r, fresh, &mut cur, &mut out);
    out
}

/// Extends `base` (ids `0..base.len()`) by `extra` new vertices and a random
/// set of instances through them, until the result is in `C_0` with
/// `base ≤` result. Each instance is kept with probability `density`.
pub fn random_extension<R: Rng>(
    base: &FiniteStructure,
    extra: u32,
    density: f64,
    rng: &mut R,
) -> Result<FiniteStructure> {
    let sig = base.signature().clone();
    let k = base.len() as u32;
    let order = k + extra;
    let base_ids: Vec<u32> = base.ids().to_vec();
    let r = sig.relations()[0].arity;
    let candidates = tuples(order, r, k);
    let mut p = density;
    for _ in 0..200 {
        let mut inst = base.id_instances();
        for t in &candidates {
            if rng.gen_bool(p) {
                inst.push((0, t.clone()));
            }
        }
        let s = FiniteStructure::new(sig.clone(), 0..order, inst, None)?;
        if in_c0(&s).verdict == Verdict::Pass && is_self_sufficient(&s, &s.set_of(&base_ids)?, &s.all())?.holds {
            return Ok(s);
        }
        p *= 0.9;
    }
    Ok(base.extended(&(k..order).collect::<Vec<_>>(), &[], &[])?)
}

/// A random structure in `C_0` on ids `0..order`.
pub fn random_c0<R: Rng>(sig: &Signature, order: u32, density: f64, rng: &mut R) -> Result<FiniteStructure> {
    random_extension(&FiniteStructure::empty(sig.clone()), order, density, rng)
}

/// A free amalgam `F = A ∐_B C`, as `(F, ids of A, ids of B, ids of C)`.
pub type RandomAmalgam = (FiniteStructure, Vec<u32>, Vec<u32>, Vec<u32>);

/// Random factors with at most `max_factor` vertices over a common base of
/// at most two vertices, self-sufficient in both.
pub fn random_free_amalgam<R: Rng>(sig: &Signature, max_factor: u32, rng: &mut R) -> Result<RandomAmalgam> {
    if max_factor < 2 {
        return Err(Error::Input("factors need at least two vertices".into()));
    }
    let k = rng.gen_range(0..=2.min(max_factor - 1));
    let b = random_c0(sig, k, 0.5, rng)?;
    let density = *[0.25, 0.4, 0.6].choose(rng).unwrap();
    let a = random_extension(&b, rng.gen_range(1..=max_factor - k), density, rng)?;
    let c = random_extension(&b, rng.gen_range(1..=max_factor - k), density, rng)?;
    let glue: Vec<(u32, u32)> = (0..k).map(|i| (i, i)).collect();
    let am = free_amalgam(&a, &c, &glue)?;
    let a_ids = a.ids().to_vec();
    let c_ids: Vec<u32> = c.ids().iter().map(|i| am.right[i]).collect();
    Ok((am.structure, a_ids, (0..k).collect(), c_ids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_structures_are_in_c0() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sig in [Signature::single(2, 1, 2).unwrap(), Signature::single(1, 1, 3).unwrap()] {
            for order in 0..10 {
                let s = random_c0(&sig, order, 0.4, &mut rng).unwrap();
                assert_eq!(s.len(), order as usize);
                assert_eq!(in_c0(&s).verdict, Verdict::Pass);
            }
        }
    }

    #[test]
    fn amalgams_have_strong_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sig = Signature::single(2, 1, 2).unwrap();
        for _ in 0..30 {
            let (f, a, b, c) = random_free_amalgam(&sig, 6, &mut rng).unwrap();
            assert_eq!(in_c0(&f).verdict, Verdict::Pass);
            for side in [&a, &c] {
                assert!(
                    is_self_sufficient(&f, &f.set_of(side).unwrap(), &f.all())
                        .unwrap()
                        .holds
                );
                assert!(side.len() <= 6);
            }
            assert!(b.iter().all(|x| a.contains(x) && c.contains(x)));
            // no instance crosses the two sides
            let (ao, co) = (f.set_of(&a).unwrap(), f.set_of(&c).unwrap());
            let (ao, co) = (ao.difference(&co), co.difference(&ao));
            for (_, t) in f.instances_inside(&f.all()) {
                assert!(!(t.iter().any(|&p| ao.contains(p as usize)) && t.iter().any(|&p| co.contains(p as usize))));
            }
        }
    }
}
