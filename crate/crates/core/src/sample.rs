//! Deterministic enumeration and seeded sampling of quivers, base objects,
//! and representations.
//!
//! Enumeration is exhaustive up to the stated bounds and visits canonical
//! forms in a fixed order, so tests that sweep these lists are
//! reproducible.  Sampling uses a counter-based generator seeded from a
//! `u64`, so any randomized check can be replayed from its seed alone.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{hom_basis, BaseMorphism, BaseObject, Instance};
use crate::error::Error;
use crate::fp::Mat;
use crate::quiver::Quiver;
use crate::rep::Representation;

/// The two-vertex quiver `1 → 2`.
pub fn a2_quiver() -> Arc<Quiver> {
    Arc::new(Quiver::new(vec!["1", "2"], vec![("a", "1", "2")]).unwrap())
}

/// The demo quiver: vertices 1..4 with arrows `a: 1→3`, `b: 2→3`, `c: 3→4`.
pub fn demo_quiver() -> Arc<Quiver> {
    Arc::new(
        Quiver::new(
            vec!["1", "2", "3", "4"],
            vec![("a", "1", "3"), ("b", "2", "3"), ("c", "3", "4")],
        )
        .unwrap(),
    )
}

/// A single vertex with a loop — rooted on neither side.
pub fn loop_quiver() -> Arc<Quiver> {
    Arc::new(Quiver::new(vec!["v"], vec![("l", "v", "v")]).unwrap())
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Square-zero action with `rank` generator/socle pairs followed by
/// `dim - 2·rank` trivial lines: the canonical form of every module over
/// the dual numbers.
fn canonical_nil(p: u64, dim: usize, rank: usize) -> Mat {
    let mut nil = Mat::zeros(p, dim, dim);
    for i in 0..rank {
        nil.set(rank + i, i, 1);
    }
    nil
}

/// All base objects of dimension at most `max_dim`, one per isomorphism
/// class, in (dimension, nil rank) order.
pub fn enumerate_objects(instance: Instance, max_dim: usize) -> Vec<BaseObject> {
    let mut out = Vec::new();
    for dim in 0..=max_dim {
        if instance.is_dual() {
            for rank in 0..=dim / 2 {
                out.push(
                    BaseObject::module(instance, dim, canonical_nil(instance.p(), dim, rank))
                        .unwrap(),
                );
            }
        } else {
            out.push(BaseObject::vector_space(instance, dim));
        }
    }
    out
}

/// All `rows × cols` matrices over F_p, in base-p counter order.  Panics
/// if the count would exceed `2^20`; callers control the bounds.
pub fn all_matrices(p: u64, rows: usize, cols: usize) -> Vec<Mat> {
    let cells = rows * cols;
    let total = (p as u128).checked_pow(cells as u32).expect("matrix space too large");
    assert!(total <= 1 << 20, "matrix space too large to enumerate");
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u64; cells];
    loop {
        let mut m = Mat::zeros(p, rows, cols);
        for (i, &d) in digits.iter().enumerate() {
            m.set(i / cols, i % cols, d);
        }
        out.push(m);
        let mut carry = 0;
        loop {
            if carry == cells {
                return out;
            }
            digits[carry] += 1;
            if digits[carry] < p {
                break;
            }
            digits[carry] = 0;
            carry += 1;
        }
    }
}

/// Every module map `m → n`, as all F_p-combinations of a hom basis.
pub fn enumerate_morphisms(m: &BaseObject, n: &BaseObject) -> Result<Vec<BaseMorphism>, Error> {
    let basis = hom_basis(m, n)?;
    let p = m.instance().p();
    let mut out = Vec::new();
    for coeffs in all_matrices(p, basis.len(), 1) {
        let mut mat = Mat::zeros(p, n.dim(), m.dim());
        for (i, b) in basis.iter().enumerate() {
            mat = mat.add(&b.matrix().scale(coeffs.get(i, 0)));
        }
        out.push(BaseMorphism::new(m.clone(), n.clone(), mat)?);
    }
    Ok(out)
}

/// Every representation of `quiver` with all vertex dimensions at most
/// `max_dim`, exhaustively: each choice of vertex objects (up to
/// isomorphism) combined with each choice of arrow maps.
pub fn enumerate_reps(
    quiver: &Arc<Quiver>,
    instance: Instance,
    max_dim: usize,
) -> Result<Vec<Representation>, Error> {
    let objects = enumerate_objects(instance, max_dim);
    let n = quiver.vertex_count();
    let mut out = Vec::new();
    let mut obj_pick = vec![0usize; n];
    loop {
        let objs: Vec<BaseObject> = obj_pick.iter().map(|&i| objects[i].clone()).collect();
        let mut per_arrow = Vec::with_capacity(quiver.arrow_count());
        for arrow in quiver.arrows() {
            per_arrow.push(enumerate_morphisms(&objs[arrow.src], &objs[arrow.tgt])?);
        }
        let mut map_pick = vec![0usize; per_arrow.len()];
        loop {
            let maps: Vec<BaseMorphism> =
                map_pick.iter().enumerate().map(|(k, &i)| per_arrow[k][i].clone()).collect();
            out.push(Representation::new(quiver.clone(), instance, objs.clone(), maps)?);
            if !bump(&mut map_pick, |k| per_arrow[k].len()) {
                break;
            }
        }
        if !bump(&mut obj_pick, |_| objects.len()) {
            break;
        }
    }
    Ok(out)
}

/// Odometer increment; returns false once the counter wraps around.
fn bump<F: Fn(usize) -> usize>(digits: &mut [usize], radix: F) -> bool {
    for i in 0..digits.len() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// A random object of dimension at most `max_dim`: a canonical form
/// conjugated by a random change of basis, so presentations are not
/// normalized.
pub fn random_object(rng: &mut ChaCha8Rng, instance: Instance, max_dim: usize) -> BaseObject {
    let dim = rng.gen_range(0..=max_dim);
    if !instance.is_dual() {
        return BaseObject::vector_space(instance, dim);
    }
    let p = instance.p();
    let rank = if dim == 0 { 0 } else { rng.gen_range(0..=dim / 2) };
    let nil = canonical_nil(p, dim, rank);
    let t = random_invertible(rng, p, dim);
    let conj = t.matmul(&nil).matmul(&t.inverse().expect("t is invertible"));
    BaseObject::module(instance, dim, conj).expect("conjugate of a square-zero action")
}

pub fn random_invertible(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Mat {
    loop {
        let mut m = Mat::zeros(p, n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, rng.gen_range(0..p));
            }
        }
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random module map `m → n`, uniform over the hom space.
pub fn random_morphism(
    rng: &mut ChaCha8Rng,
    m: &BaseObject,
    n: &BaseObject,
) -> Result<BaseMorphism, Error> {
    let basis = hom_basis(m, n)?;
    let p = m.instance().p();
    let mut mat = Mat::zeros(p, n.dim(), m.dim());
    for b in &basis {
        mat = mat.add(&b.matrix().scale(rng.gen_range(0..p)));
    }
    BaseMorphism::new(m.clone(), n.clone(), mat)
}

/// A random representation with vertex dimensions at most `max_dim`.
pub fn random_rep(
    rng: &mut ChaCha8Rng,
    quiver: &Arc<Quiver>,
    instance: Instance,
    max_dim: usize,
) -> Result<Representation, Error> {
    let objs: Vec<BaseObject> =
        (0..quiver.vertex_count()).map(|_| random_object(rng, instance, max_dim)).collect();
    let mut maps = Vec::with_capacity(quiver.arrow_count());
    for arrow in quiver.arrows() {
        maps.push(random_morphism(rng, &objs[arrow.src], &objs[arrow.tgt])?);
    }
    Representation::new(quiver.clone(), instance, objs, maps)
}

/// A random quiver with `1..=max_vertices` vertices and up to `max_arrows`
/// arrows; self-loops and parallel arrows are allowed, so the result need
/// not be rooted on either side.
pub fn random_quiver(rng: &mut ChaCha8Rng, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.gen_range(1..=max_vertices);
    let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let arrow_count = rng.gen_range(0..=max_arrows);
    let arrows: Vec<(String, String, String)> = (1..=arrow_count)
        .map(|i| {
            let src = rng.gen_range(0..n);
            let tgt = rng.gen_range(0..n);
            (format!("a{i}"), vertices[src].clone(), vertices[tgt].clone())
        })
        .collect();
    Quiver::new(vertices, arrows).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::f_free;

    #[test]
    fn exhaustive_a2_count_over_f2() {
        let fv = Instance::finvect(2).unwrap();
        let reps = enumerate_reps(&a2_quiver(), fv, 2).unwrap();
        // sum over (d1, d2) ≤ (2, 2) of 2^(d1·d2)
        assert_eq!(reps.len(), 31);
        let distinct: std::collections::HashSet<String> =
            reps.iter().map(|r| format!("{r:?}")).collect();
        assert_eq!(distinct.len(), 31);
    }

    #[test]
    fn dual_objects_come_in_canonical_forms() {
        let dual = Instance::dual_numbers(3).unwrap();
        let objs = enumerate_objects(dual, 4);
        // dims 0..4 contribute 1 + 1 + 2 + 2 + 3 classes
        assert_eq!(objs.len(), 9);
        assert_eq!(objs.iter().filter(|o| o.is_free()).count(), 3); // 0, Λ, Λ²
        for o in &objs {
            assert!(o.action().matmul(&o.action()).is_zero());
        }
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let dual = Instance::dual_numbers(2).unwrap();
        let q = demo_quiver();
        let a = random_rep(&mut seeded_rng(7), &q, dual, 3).unwrap();
        let b = random_rep(&mut seeded_rng(7), &q, dual, 3).unwrap();
        assert_eq!(a, b);
        let c = random_rep(&mut seeded_rng(8), &q, dual, 3).unwrap();
        assert!(a != c || a.total_dim() == c.total_dim());
    }

    #[test]
    fn random_objects_have_square_zero_actions() {
        let dual = Instance::dual_numbers(5).unwrap();
        let mut rng = seeded_rng(42);
        for _ in 0..50 {
            let o = random_object(&mut rng, dual, 4);
            assert!(o.action().matmul(&o.action()).is_zero());
            if o.dim() % 2 == 0 {
                assert_eq!(o.is_free(), o.iso_eq(&dual.free_object(o.dim() / 2)));
            } else {
                assert!(!o.is_free());
            }
        }
    }

    #[test]
    fn random_quivers_obey_bounds() {
        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            let q = random_quiver(&mut rng, 5, 6);
            assert!(q.vertex_count() >= 1 && q.vertex_count() <= 5);
            assert!(q.arrow_count() <= 6);
        }
    }

    #[test]
    fn evaluation_recovers_random_modules_from_their_adjoints() {
        // f is left adjoint to evaluation, on the nose at the seed vertex
        let dual = Instance::dual_numbers(2).unwrap();
        let q = demo_quiver();
        let mut rng = seeded_rng(11);
        for _ in 0..10 {
            let m = random_object(&mut rng, dual, 3);
            for v in 0..4 {
                let f = f_free(&q, v, &m).unwrap();
                assert_eq!(f.object(v), &m);
            }
        }
    }
}
