//! Strict symmetric powers of representations with the Koszul sign rule:
//! even-degree generators commute, odd-degree generators anticommute (so odd
//! squares vanish).
//!
//! Only strict representations are accepted; the non-strict construction
//! needs the full tensor-product combinatorics and is out of scope here.

use std::collections::BTreeMap;

use crate::cochain::{GradedBundle, GradedMap, Tensor};
use crate::error::Result;
use crate::groupoid::ObjId;
use crate::linalg::Matrix;
use crate::rep::Rep;
use crate::scalar::Scalar;

/// A generator of the fiber over one object: `(degree, basis index)`.
type Gen = (i64, usize);

/// A monomial: a sorted list of generators, odd degrees without repetition.
type Monomial = Vec<Gen>;

/// The monomial basis of `S^q` of a graded fiber, grouped by total degree.
#[derive(Clone, Debug)]
struct SymBasis {
    /// degree -> monomials in lexicographic order
    by_degree: BTreeMap<i64, Vec<Monomial>>,
    /// monomial -> (degree, position)
    index: BTreeMap<Monomial, (i64, usize)>,
}

fn parity(degree: i64) -> bool {
    degree.rem_euclid(2) == 1
}

/// Enumerates the monomials of length `q` over the generators of a fiber.
fn sym_basis(bundle: &GradedBundle, x: ObjId, q: usize) -> SymBasis {
    let mut gens: Vec<Gen> = Vec::new();
    for l in bundle.degrees() {
        for j in 0..bundle.dim(x, l) {
            gens.push((l, j));
        }
    }
    let mut monomials = Vec::new();
    let mut stack: Monomial = Vec::new();
    fn rec(gens: &[Gen], start: usize, remaining: usize, stack: &mut Monomial, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(stack.clone());
            return;
        }
        for i in start..gens.len() {
            let g = gens[i];
            // odd generators may not repeat
            if parity(g.0) && stack.last() == Some(&g) {
                continue;
            }
            stack.push(g);
            rec(gens, if parity(g.0) { i + 1 } else { i }, remaining - 1, stack, out);
            stack.pop();
        }
    }
    rec(&gens, 0, q, &mut stack, &mut monomials);
    let mut by_degree: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    for m in monomials {
        let degree: i64 = m.iter().map(|g| g.0).sum();
        by_degree.entry(degree).or_default().push(m);
    }
    let mut index = BTreeMap::new();
    for (&d, list) in &by_degree {
        for (i, m) in list.iter().enumerate() {
            index.insert(m.clone(), (d, i));
        }
    }
    SymBasis { by_degree, index }
}

/// Sorts a generator sequence into canonical order, tracking the Koszul sign.
/// Returns `None` when an odd generator repeats.
fn normalize<T: Scalar>(mut seq: Vec<Gen>) -> Option<(T, Monomial)> {
    let mut sgn = T::one();
    // insertion sort; each adjacent swap of generators u, v contributes
    // (-1)^{|u||v|}
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j] < seq[j - 1] {
            if parity(seq[j].0) && parity(seq[j - 1].0) {
                sgn = -sgn;
            }
            seq.swap(j, j - 1);
            j -= 1;
        }
    }
    for w in seq.windows(2) {
        if w[0] == w[1] && parity(w[0].0) {
            return None;
        }
    }
    Some((sgn, seq))
}

/// Expands a product of linear combinations of generators into the monomial
/// basis: `factors[i]` is the image of the `i`-th generator of the input
/// monomial as a list of `(coefficient, generator)` terms.
fn expand_product<T: Scalar>(factors: &[Vec<(T, Gen)>]) -> BTreeMap<Monomial, T> {
    let mut acc: BTreeMap<Monomial, T> = BTreeMap::new();
    // seed with the empty product
    acc.insert(Vec::new(), T::one());
    for factor in factors {
        let mut next: BTreeMap<Monomial, T> = BTreeMap::new();
        for (m, c) in &acc {
            for (coef, g) in factor {
                let mut seq = m.clone();
                seq.push(*g);
                // no normalization yet: order is restored at the end
                let key = seq;
                let add = c.clone() * coef.clone();
                let entry = next.entry(key).or_insert_with(T::zero);
                *entry = entry.clone() + add;
            }
        }
        acc = next;
    }
    let mut out: BTreeMap<Monomial, T> = BTreeMap::new();
    for (seq, c) in acc {
        if c.is_zero() {
            continue;
        }
        if let Some((sgn, m)) = normalize::<T>(seq) {
            let entry = out.entry(m).or_insert_with(T::zero);
            *entry = entry.clone() + sgn * c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Derivation extension of a degree-one fiber map to a monomial:
/// `∂(v_1 ... v_q) = Σ_i (-1)^{|v_1|+...+|v_{i-1}|} v_1 ... ∂(v_i) ... v_q`.
fn extend_derivation<T: Scalar>(
    partial: &GradedMap<T>,
    monomial: &Monomial,
) -> BTreeMap<Monomial, T> {
    let mut out: BTreeMap<Monomial, T> = BTreeMap::new();
    let mut prefix_parity = false;
    for (i, &(l, j)) in monomial.iter().enumerate() {
        let koszul: T = if prefix_parity { -T::one() } else { T::one() };
        if let Some(block) = partial.block(l) {
            for r in 0..block.rows() {
                let c = block.get(r, j);
                if c.is_zero() {
                    continue;
                }
                let mut seq: Vec<Gen> = monomial.clone();
                seq[i] = (l + 1, r);
                if let Some((sgn, m)) = normalize::<T>(seq) {
                    let entry = out.entry(m).or_insert_with(T::zero);
                    *entry = entry.clone() + koszul.clone() * sgn * c;
                }
            }
        }
        prefix_parity ^= parity(l);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Diagonal extension of a degree-zero fiber map.
fn extend_diagonal<T: Scalar>(map: &GradedMap<T>, monomial: &Monomial) -> BTreeMap<Monomial, T> {
    let factors: Vec<Vec<(T, Gen)>> = monomial
        .iter()
        .map(|&(l, j)| {
            let mut terms = Vec::new();
            if let Some(block) = map.block(l) {
                for r in 0..block.rows() {
                    let c = block.get(r, j);
                    if !c.is_zero() {
                        terms.push((c, (l, r)));
                    }
                }
            }
            terms
        })
        .collect();
    expand_product(&factors)
}

/// The `q`-th strict symmetric power of a strict representation: underlying
/// complex `S^q(E, ∂)` with the Koszul convention, diagonal quasi-action,
/// higher tensors zero.
pub fn strict_symmetric_power<T: Scalar>(q: usize, rep: &Rep<T>) -> Result<Rep<T>> {
    rep.require_strict()?;
    let g = rep.groupoid().clone();
    let bundle = rep.bundle();
    let bases: Vec<SymBasis> = g.objects().map(|x| sym_basis(bundle, x, q)).collect();

    // amplitude of the power: q*a .. q*b always contains every monomial degree
    let (a, b) = bundle.amplitude();
    let (qa, qb) = if q == 0 { (0, 0) } else { (q as i64 * a, q as i64 * b) };
    let dims: Vec<Vec<usize>> = g
        .objects()
        .map(|x| {
            (qa..=qb)
                .map(|l| bases[x.0].by_degree.get(&l).map_or(0, Vec::len))
                .collect()
        })
        .collect();
    let sym_bundle = GradedBundle::new(qa, qb, dims);

    let mut partial = Tensor::zero(0, 1);
    for x in g.objects() {
        let fiber_partial = rep.differential_at(x);
        let basis = &bases[x.0];
        let mut gm = GradedMap::zero(1);
        for (&l, monomials) in &basis.by_degree {
            let rows = basis.by_degree.get(&(l + 1)).map_or(0, Vec::len);
            if rows == 0 {
                continue;
            }
            let mut block = Matrix::zero(rows, monomials.len());
            for (col, m) in monomials.iter().enumerate() {
                for (target, c) in extend_derivation(&fiber_partial, m) {
                    let (deg, row) = basis.index[&target];
                    debug_assert_eq!(deg, l + 1);
                    block.set(row, col, c);
                }
            }
            gm.set_block(l, block);
        }
        if !gm.is_zero() {
            partial.set(crate::groupoid::GString::object(x), gm);
        }
    }

    let lambda_in = rep.r(1);
    let mut lambda = Tensor::zero(1, 0);
    for arr in g.arrows() {
        let s = crate::groupoid::GString::from_arrows(&g, vec![arr]).unwrap();
        let fiber_map = lambda_in
            .get(&s)
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(0));
        let src_basis = &bases[g.src(arr).0];
        let tgt_basis = &bases[g.tgt(arr).0];
        let mut gm = GradedMap::zero(0);
        for (&l, monomials) in &src_basis.by_degree {
            let rows = tgt_basis.by_degree.get(&l).map_or(0, Vec::len);
            if rows == 0 {
                continue;
            }
            let mut block = Matrix::zero(rows, monomials.len());
            for (col, m) in monomials.iter().enumerate() {
                for (target, c) in extend_diagonal(&fiber_map, m) {
                    let (deg, row) = tgt_basis.index[&target];
                    debug_assert_eq!(deg, l);
                    block.set(row, col, c);
                }
            }
            gm.set_block(l, block);
        }
        if !gm.is_zero() {
            lambda.set(s, gm);
        }
    }

    Rep::strict(g, sym_bundle, partial, lambda)
}

/// `S^q` of a strict morphism: the diagonal extension of `ζ_0`.
pub fn strict_symmetric_power_morphism<T: Scalar>(
    q: usize,
    zeta: &crate::morphism::Morphism<T>,
) -> Result<crate::morphism::Morphism<T>> {
    use crate::morphism::Morphism;
    zeta.source().require_strict()?;
    zeta.target().require_strict()?;
    if !zeta.is_strict() {
        return Err(crate::error::Error::NotStrict { k: 1 });
    }
    let g = zeta.source().groupoid().clone();
    let sq_source = strict_symmetric_power(q, zeta.source())?;
    let sq_target = strict_symmetric_power(q, zeta.target())?;
    let src_bases: Vec<SymBasis> =
        g.objects().map(|x| sym_basis(zeta.source().bundle(), x, q)).collect();
    let tgt_bases: Vec<SymBasis> =
        g.objects().map(|x| sym_basis(zeta.target().bundle(), x, q)).collect();
    let z0 = zeta.phi(0);
    let mut phi0 = Tensor::zero(0, 0);
    for x in g.objects() {
        let fiber_map = z0
            .get(&crate::groupoid::GString::object(x))
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(0));
        let mut gm = GradedMap::zero(0);
        for (&l, monomials) in &src_bases[x.0].by_degree {
            let rows = tgt_bases[x.0].by_degree.get(&l).map_or(0, Vec::len);
            if rows == 0 {
                continue;
            }
            let mut block = Matrix::zero(rows, monomials.len());
            for (col, m) in monomials.iter().enumerate() {
                for (target, c) in extend_diagonal(&fiber_map, m) {
                    let (deg, row) = tgt_bases[x.0].index[&target];
                    debug_assert_eq!(deg, l);
                    block.set(row, col, c);
                }
            }
            gm.set_block(l, block);
        }
        if !gm.is_zero() {
            phi0.set(crate::groupoid::GString::object(x), gm);
        }
    }
    Morphism::new(sq_source, sq_target, vec![phi0])
}
