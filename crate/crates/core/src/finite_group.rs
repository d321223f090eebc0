//! Structure of the reduced groups E(k_v): exact point counts, abelian
//! shape ℤ/m × ℤ/n, Frobenius π, the annihilator γ(v) of the cyclic
//! ℤ[i]-module structure, ℤ[i]-generators, discrete logarithms, and
//! subgroup membership — all by desk-scale exact algorithms.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::curves::{Curve, Point, ProductPoint};
use crate::fields::FiniteField;
use crate::gaussian::{gi_mod, GaussianInt};
use crate::zlattice::{self, ZMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FgError {
    /// A configured cap prevented the computation; never silent.
    ResourceLimit,
    /// No Frobenius with the requested trace exists.
    InconsistentFrobenius,
    /// γ(v) candidates fail to annihilate the group.
    AnnihilatorNotFound,
    /// ℤ[i]-generator search exhausted the group (§6 cyclicity violated —
    /// must not occur for good places of the CM family).
    GeneratorSearchFailed,
    /// Point not in the group / off-curve input.
    NotInGroup,
}

impl fmt::Display for FgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FgError::ResourceLimit => write!(f, "resource cap exceeded"),
            FgError::InconsistentFrobenius => write!(f, "order matches no Frobenius trace"),
            FgError::AnnihilatorNotFound => write!(f, "no annihilator candidate works"),
            FgError::GeneratorSearchFailed => write!(f, "Z[i]-generator search failed"),
            FgError::NotInGroup => write!(f, "point not in group"),
        }
    }
}

// ---------------------------------------------------------------------------
// enumeration and counting
// ---------------------------------------------------------------------------

fn point_key<F: FiniteField>(p: &Point<F>, q: u64) -> u128 {
    match p {
        Point::Infinity => u128::MAX,
        Point::Affine(x, y) => (x.elem_index() as u128) * (q as u128) + (y.elem_index() as u128),
    }
}

/// Deterministic stream of all points: ∞ first, then by ascending x index
/// with the smaller y index first.
pub struct PointStream<F: FiniteField> {
    curve: Curve<F>,
    q: u64,
    next_x: u64,
    pending: Vec<Point<F>>,
    emitted_infinity: bool,
}

impl<F: FiniteField> PointStream<F> {
    pub fn new(curve: &Curve<F>) -> Self {
        let q = curve.a.field_order();
        PointStream {
            curve: curve.clone(),
            q,
            next_x: 0,
            pending: Vec::new(),
            emitted_infinity: false,
        }
    }
}

impl<F: FiniteField> Iterator for PointStream<F> {
    type Item = Point<F>;

    fn next(&mut self) -> Option<Point<F>> {
        if !self.emitted_infinity {
            self.emitted_infinity = true;
            return Some(Point::Infinity);
        }
        if let Some(p) = self.pending.pop() {
            return Some(p);
        }
        while self.next_x < self.q {
            let x = F::from_index(&self.curve.a, self.next_x);
            self.next_x += 1;
            let fx = x.mul(&x).mul(&x).add(&self.curve.a.mul(&x)).add(&self.curve.b);
            if let Some(y) = fx.sqrt() {
                let p1 = Point::Affine(x.clone(), y.clone());
                if !y.is_zero() {
                    let neg = self.curve.neg(&p1);
                    // smaller y index first
                    let (lo, hi) = match (&p1, &neg) {
                        (Point::Affine(_, a), Point::Affine(_, b)) => {
                            if a.elem_index() <= b.elem_index() {
                                (p1.clone(), neg.clone())
                            } else {
                                (neg.clone(), p1.clone())
                            }
                        }
                        _ => unreachable!(),
                    };
                    self.pending.push(hi);
                    return Some(lo);
                }
                return Some(p1);
            }
        }
        None
    }
}

/// Exact |E(k)| by exhaustive x-scan with a square-multiplicity table.
pub fn group_order<F: FiniteField>(curve: &Curve<F>) -> u64 {
    let q = curve.a.field_order();
    let mut counts = vec![0u8; q as usize];
    for yi in 0..q {
        let y = F::from_index(&curve.a, yi);
        counts[y.mul(&y).elem_index() as usize] += 1;
    }
    let mut total = 1u64; // infinity
    for xi in 0..q {
        let x = F::from_index(&curve.a, xi);
        let fx = x.mul(&x).mul(&x).add(&curve.a.mul(&x)).add(&curve.b);
        total += counts[fx.elem_index() as usize] as u64;
    }
    total
}

/// [q+1−2√q, q+1+2√q] with exact integer endpoints.
pub fn hasse_interval(q: u64) -> (u64, u64) {
    // floor(2√q) = isqrt(4q)
    let mut t = (4 * q) as f64;
    t = libm::sqrt(t);
    let mut s = t as u64;
    while (s + 1) * (s + 1) <= 4 * q {
        s += 1;
    }
    while s * s > 4 * q {
        s -= 1;
    }
    (q + 1 - s, q + 1 + s)
}

pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn divisors_sorted(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = 1u64;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    divs
}

/// Exact order of a point given a multiple `n` of it (with factorization).
pub fn point_order<F: FiniteField>(
    curve: &Curve<F>,
    p: &Point<F>,
    n: u64,
    n_factors: &[(u64, u32)],
) -> u64 {
    debug_assert!(curve.scalar_mul(&BigInt::from(n), p).is_infinity());
    let mut ord = n;
    for &(q, _) in n_factors {
        while ord % q == 0
            && curve.scalar_mul(&BigInt::from(ord / q), p).is_infinity()
        {
            ord /= q;
        }
    }
    ord
}

// ---------------------------------------------------------------------------
// abelian structure
// ---------------------------------------------------------------------------

/// E(k) ≅ ℤ/m × ℤ/n with m | n, m·n = order; generators realize the shape.
#[derive(Clone, Debug)]
pub struct ReducedGroupInfo<F> {
    pub order: u64,
    /// (m, n) with m | n.
    pub shape: (u64, u64),
    /// `[T1]` for cyclic groups, `[T2, T1]` with orders (m, n) otherwise.
    pub generators: Vec<Point<F>>,
}

fn multiples_table<F: FiniteField>(
    curve: &Curve<F>,
    g: &Point<F>,
    ord: u64,
) -> BTreeMap<u128, u64> {
    let q = curve.a.field_order();
    let mut table = BTreeMap::new();
    let mut acc = Point::Infinity;
    for k in 0..ord {
        table.entry(point_key(&acc, q)).or_insert(k);
        acc = curve.add(&acc, g);
    }
    table
}

/// Abelian group structure by deterministic streaming; certified
/// exhaustively for orders ≤ 10⁴ and by order counting beyond.
pub fn group_structure<F: FiniteField>(
    curve: &Curve<F>,
    order: u64,
    cap: u64,
) -> Result<ReducedGroupInfo<F>, FgError> {
    if order > cap {
        return Err(FgError::ResourceLimit);
    }
    if order == 1 {
        return Ok(ReducedGroupInfo { order, shape: (1, 1), generators: vec![Point::Infinity] });
    }
    let factors = factor_u64(order);
    let mut exponent_seen = 1u64;
    let mut best: Option<(u64, Point<F>)> = None;
    let stream = PointStream::new(curve);
    let mut examined: Vec<Point<F>> = Vec::new();
    for p in stream {
        if p.is_infinity() {
            continue;
        }
        let ord = point_order(curve, &p, order, &factors);
        examined.push(p.clone());
        exponent_seen = num_integer::lcm(exponent_seen, ord);
        if best.as_ref().map_or(true, |(b, _)| ord > *b) {
            best = Some((ord, p));
        }
        let (max_ord, t1) = best.as_ref().expect("nonempty");
        // A witness of full exponent with a complementary factor dividing it
        // pins the invariant factors (m, n) = (order/n, n).
        if *max_ord == exponent_seen && order % max_ord == 0 {
            let n = *max_ord;
            let m = order / n;
            if n % m != 0 {
                continue;
            }
            if m == 1 {
                let info =
                    ReducedGroupInfo { order, shape: (1, n), generators: vec![t1.clone()] };
                certify(curve, &info)?;
                return Ok(info);
            }
            let t1_table = multiples_table(curve, t1, n);
            let q = curve.a.field_order();
            // second generator: image order in G/⟨T1⟩ must be exactly m
            let complement = |cand: &Point<F>| -> Option<Point<F>> {
                let cand_ord = point_order(curve, cand, order, &factors);
                let mut image_ord = None;
                for d in divisors_sorted(&factor_u64(cand_ord)) {
                    let dp = curve.scalar_mul(&BigInt::from(d), cand);
                    if t1_table.contains_key(&point_key(&dp, q)) {
                        image_ord = Some(d);
                        break;
                    }
                }
                if image_ord != Some(m) {
                    return None;
                }
                let mp = curve.scalar_mul(&BigInt::from(m), cand);
                let j = *t1_table.get(&point_key(&mp, q)).expect("m·Q ∈ ⟨T1⟩");
                debug_assert_eq!(j % m, 0);
                let t2 = curve.sub(cand, &curve.scalar_mul(&BigInt::from(j / m), t1));
                debug_assert!(curve.scalar_mul(&BigInt::from(m), &t2).is_infinity());
                Some(t2)
            };
            let mut found = None;
            for cand in &examined {
                if let Some(t2) = complement(cand) {
                    found = Some(t2);
                    break;
                }
            }
            if found.is_none() {
                for cand in PointStream::new(curve).skip(1) {
                    if let Some(t2) = complement(&cand) {
                        found = Some(t2);
                        break;
                    }
                }
            }
            if let Some(t2) = found {
                let info =
                    ReducedGroupInfo { order, shape: (m, n), generators: vec![t2, t1.clone()] };
                certify(curve, &info)?;
                return Ok(info);
            }
        }
    }
    Err(FgError::GeneratorSearchFailed)
}

/// Exhaustive span certification below 10⁴ elements; order bookkeeping is
/// the certificate above that.
fn certify<F: FiniteField>(curve: &Curve<F>, info: &ReducedGroupInfo<F>) -> Result<(), FgError> {
    let (m, n) = info.shape;
    if m * n != info.order {
        return Err(FgError::GeneratorSearchFailed);
    }
    if info.order > 10_000 {
        return Ok(());
    }
    let q = curve.a.field_order();
    let mut seen = BTreeMap::new();
    match info.generators.len() {
        1 => {
            let t1 = &info.generators[0];
            let mut acc = Point::Infinity;
            for _ in 0..n {
                seen.insert(point_key(&acc, q), ());
                acc = curve.add(&acc, t1);
            }
        }
        2 => {
            let (t2, t1) = (&info.generators[0], &info.generators[1]);
            let mut outer = Point::Infinity;
            for _ in 0..m {
                let mut acc = outer.clone();
                for _ in 0..n {
                    seen.insert(point_key(&acc, q), ());
                    acc = curve.add(&acc, t1);
                }
                outer = curve.add(&outer, t2);
            }
        }
        _ => return Err(FgError::GeneratorSearchFailed),
    }
    if seen.len() as u64 == info.order {
        Ok(())
    } else {
        Err(FgError::GeneratorSearchFailed)
    }
}

// ---------------------------------------------------------------------------
// Frobenius and γ(v)
// ---------------------------------------------------------------------------

/// π = x + yi with x² + y² = p and p + 1 − 2x = order, normalized y > 0.
pub fn frobenius_pi(p: u64, order: u64) -> Result<GaussianInt, FgError> {
    let total = (p + 1) as i64 - order as i64;
    if total % 2 != 0 {
        return Err(FgError::InconsistentFrobenius);
    }
    let x = total / 2;
    let y2 = p as i64 - x * x;
    if y2 <= 0 {
        return Err(FgError::InconsistentFrobenius);
    }
    let y = {
        let mut r = libm::sqrt(y2 as f64) as i64;
        while (r + 1) * (r + 1) <= y2 {
            r += 1;
        }
        while r * r > y2 {
            r -= 1;
        }
        r
    };
    if y * y != y2 {
        return Err(FgError::InconsistentFrobenius);
    }
    Ok(GaussianInt::new(x, y))
}

/// γ(v), a verified ℤ[i]-generator G with ℤ[i]·G = E(k_v), and the resolved
/// Frobenius for split places.
#[derive(Clone, Debug)]
pub struct ZiStructure<F> {
    /// Canonical associate; N(γ) = |E(k_v)| and γ·G = ∞.
    pub gamma: GaussianInt,
    pub generator: Point<F>,
    /// Split case only: the Frobenius that actually annihilates via γ = π−1.
    pub pi: Option<GaussianInt>,
    pub i_image: F,
    pub order: u64,
    pub info: ReducedGroupInfo<F>,
}

fn annihilates<F: FiniteField>(
    curve: &Curve<F>,
    gamma: &GaussianInt,
    i_image: &F,
    points: &[Point<F>],
) -> bool {
    points.iter().all(|t| {
        curve.cm_mul(gamma, t, i_image).map(|r| r.is_infinity()).unwrap_or(false)
    })
}

/// Builds the ℤ[i]-module structure given the group order and annihilator
/// candidates; the candidate that exactly annihilates the generators wins.
pub fn zi_structure<F: FiniteField>(
    curve: &Curve<F>,
    i_image: &F,
    order: u64,
    candidates: &[GaussianInt],
    cap: u64,
) -> Result<ZiStructure<F>, FgError> {
    let info = group_structure(curve, order, cap)?;
    let mut chosen: Option<GaussianInt> = None;
    for cand in candidates {
        let n = cand.norm();
        if n != BigInt::from(order) {
            continue;
        }
        if annihilates(curve, cand, i_image, &info.generators) {
            chosen = Some(cand.clone());
            break;
        }
    }
    let gamma_raw = chosen.ok_or(FgError::AnnihilatorNotFound)?;
    let gamma = gamma_raw.canonical_assoc();
    debug_assert!(annihilates(curve, &gamma, i_image, &info.generators));
    let generator = zi_generator(curve, i_image, order, &info)?;
    Ok(ZiStructure { gamma, generator, pi: None, i_image: i_image.clone(), order, info })
}

/// Searches for G with ℤ[i]·G = E(k_v). The certificate is by counting:
/// |⟨G, iG⟩| = ord(G) · (index of iG over ⟨G⟩) must equal the group order.
pub fn zi_generator<F: FiniteField>(
    curve: &Curve<F>,
    i_image: &F,
    order: u64,
    info: &ReducedGroupInfo<F>,
) -> Result<Point<F>, FgError> {
    let factors = factor_u64(order);
    let q = curve.a.field_order();
    let try_candidate = |g: &Point<F>| -> Option<Point<F>> {
        if g.is_infinity() && order > 1 {
            return None;
        }
        let ord_g = point_order(curve, g, order, &factors);
        let table = multiples_table(curve, g, ord_g);
        let ig = curve.apply_i(g, i_image).ok()?;
        let ord_ig = point_order(curve, &ig, order, &factors);
        debug_assert_eq!(ord_g, ord_ig);
        let mut index = None;
        for d in divisors_sorted(&factor_u64(ord_ig)) {
            let dp = curve.scalar_mul(&BigInt::from(d), &ig);
            if table.contains_key(&point_key(&dp, q)) {
                index = Some(d);
                break;
            }
        }
        if ord_g * index? == order {
            Some(g.clone())
        } else {
            None
        }
    };
    // structured candidates first, then the full deterministic stream
    let mut structured: Vec<Point<F>> = info.generators.clone();
    if info.generators.len() == 2 {
        let s = curve.add(&info.generators[0], &info.generators[1]);
        structured.push(s);
    }
    for g in &structured {
        if let Some(found) = try_candidate(g) {
            return Ok(found);
        }
    }
    for g in PointStream::new(curve) {
        if let Some(found) = try_candidate(&g) {
            return Ok(found);
        }
    }
    Err(FgError::GeneratorSearchFailed)
}

// ---------------------------------------------------------------------------
// ℤ[i] discrete logarithm
// ---------------------------------------------------------------------------

/// Baby-step context for discrete logs against a fixed ℤ[i]-generator:
/// c·G = P is split as a·G + b·(iG) = P with a hashed baby table over a.
pub struct ZiDlog<F: FiniteField> {
    curve: Curve<F>,
    gamma: GaussianInt,
    ig: Point<F>,
    ord_g: u64,
    ord_ig: u64,
    baby: BTreeMap<u128, u64>,
    q: u64,
}

impl<F: FiniteField> ZiDlog<F> {
    pub fn new(curve: &Curve<F>, zi: &ZiStructure<F>) -> Result<Self, FgError> {
        let factors = factor_u64(zi.order);
        let ord_g = point_order(curve, &zi.generator, zi.order, &factors);
        let ig = curve.apply_i(&zi.generator, &zi.i_image).map_err(|_| FgError::NotInGroup)?;
        let ord_ig = point_order(curve, &ig, zi.order, &factors);
        let baby = multiples_table(curve, &zi.generator, ord_g);
        Ok(ZiDlog {
            curve: curve.clone(),
            gamma: zi.gamma.clone(),
            ig,
            ord_g,
            ord_ig,
            baby,
            q: curve.a.field_order(),
        })
    }

    /// The unique c mod γ with c·G = P.
    pub fn dlog(&self, p: &Point<F>) -> Result<GaussianInt, FgError> {
        if !self.curve.contains(p) {
            return Err(FgError::NotInGroup);
        }
        let mut probe = p.clone();
        for b in 0..self.ord_ig {
            if let Some(&a) = self.baby.get(&point_key(&probe, self.q)) {
                let c = GaussianInt::new(a as i64, b as i64);
                let reduced = gi_mod(&c, &self.gamma).expect("gamma nonzero");
                return Ok(reduced);
            }
            probe = self.curve.sub(&probe, &self.ig);
        }
        let _ = self.ord_g;
        Err(FgError::NotInGroup)
    }
}

/// One-shot discrete log; builds the baby table and discards it.
pub fn zi_dlog<F: FiniteField>(
    curve: &Curve<F>,
    zi: &ZiStructure<F>,
    p: &Point<F>,
) -> Result<GaussianInt, FgError> {
    ZiDlog::new(curve, zi)?.dlog(p)
}

// ---------------------------------------------------------------------------
// subgroup membership in finite product groups
// ---------------------------------------------------------------------------

/// Coordinate context for one component group: fixed generators and the
/// table needed to express arbitrary points in those coordinates.
pub struct StructureCtx<F: FiniteField> {
    pub curve: Curve<F>,
    pub info: ReducedGroupInfo<F>,
    t1_table: BTreeMap<u128, u64>,
    q: u64,
}

impl<F: FiniteField> StructureCtx<F> {
    pub fn new(curve: &Curve<F>, order: u64, cap: u64) -> Result<Self, FgError> {
        let info = group_structure(curve, order, cap)?;
        let n = info.shape.1;
        let t1 = info.generators.last().expect("at least one generator");
        let t1_table = multiples_table(curve, t1, n);
        Ok(StructureCtx { curve: curve.clone(), info, t1_table, q: curve.a.field_order() })
    }

    /// Coordinates (a mod m, b mod n) with P = a·T2 + b·T1.
    pub fn coords(&self, p: &Point<F>) -> Result<(u64, u64), FgError> {
        let (m, _n) = self.info.shape;
        if self.info.generators.len() == 1 {
            let b = self
                .t1_table
                .get(&point_key(p, self.q))
                .copied()
                .ok_or(FgError::NotInGroup)?;
            return Ok((0, b));
        }
        let t2 = &self.info.generators[0];
        let mut probe = p.clone();
        for a in 0..m {
            if let Some(&b) = self.t1_table.get(&point_key(&probe, self.q)) {
                return Ok((a, b));
            }
            probe = self.curve.sub(&probe, t2);
        }
        Err(FgError::NotInGroup)
    }
}

/// Integer coefficients expressing `target` in the ℤ-span of `gens` inside a
/// finite product group, or None. The witness is re-verified by exact point
/// arithmetic before being returned.
pub fn subgroup_membership<F: FiniteField>(
    curves: &[Curve<F>],
    gens: &[ProductPoint<F>],
    target: &ProductPoint<F>,
    cap: u64,
) -> Result<Option<Vec<BigInt>>, FgError> {
    let g = curves.len();
    debug_assert!(gens.iter().all(|p| p.0.len() == g) && target.0.len() == g);
    if gens.is_empty() {
        return Ok(if target.is_zero() { Some(Vec::new()) } else { None });
    }
    let mut ctxs = Vec::with_capacity(g);
    for c in curves {
        let order = group_order(c);
        if order > cap {
            return Err(FgError::ResourceLimit);
        }
        ctxs.push(StructureCtx::new(c, order, cap)?);
    }
    // rows: 2 coordinates per component; columns: generators then the
    // component lattice moduli
    let rows = 2 * g;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for gen in gens {
        let mut col = Vec::with_capacity(rows);
        for (k, ctx) in ctxs.iter().enumerate() {
            let (a, b) = ctx.coords(&gen.0[k])?;
            col.push(BigInt::from(a));
            col.push(BigInt::from(b));
        }
        cols.push(col);
    }
    for (k, ctx) in ctxs.iter().enumerate() {
        let (m, n) = ctx.info.shape;
        let mut cm = vec![BigInt::zero(); rows];
        cm[2 * k] = BigInt::from(m);
        cols.push(cm);
        let mut cn = vec![BigInt::zero(); rows];
        cn[2 * k + 1] = BigInt::from(n);
        cols.push(cn);
    }
    let mut t = Vec::with_capacity(rows);
    for (k, ctx) in ctxs.iter().enumerate() {
        let (a, b) = ctx.coords(&target.0[k])?;
        t.push(BigInt::from(a));
        t.push(BigInt::from(b));
    }
    let matrix = ZMatrix::from_columns(&cols);
    match zlattice::solve(&matrix, &t) {
        None => Ok(None),
        Some(sol) => {
            let coeffs: Vec<BigInt> = sol[..gens.len()].to_vec();
            // exact re-verification in the group
            let mut acc = ProductPoint::infinity(g);
            for (c, gen) in coeffs.iter().zip(gens.iter()) {
                let term = crate::curves::product_scalar_mul(curves, c, gen);
                acc = crate::curves::product_add(curves, &acc, &term);
            }
            if acc == *target {
                Ok(Some(coeffs))
            } else {
                // coordinates were sound, so this is unreachable; stay honest
                Ok(None)
            }
        }
    }
}

/// Brute-force oracle: iterates coefficient boxes [0, ord(Sᵢ)) with early
/// exit; the combination count is capped.
pub fn subgroup_membership_bruteforce<F: FiniteField>(
    curves: &[Curve<F>],
    gens: &[ProductPoint<F>],
    target: &ProductPoint<F>,
    cap: u64,
) -> Result<Option<Vec<BigInt>>, FgError> {
    let g = curves.len();
    if gens.is_empty() {
        return Ok(if target.is_zero() { Some(Vec::new()) } else { None });
    }
    let orders: Vec<u64> = curves.iter().map(group_order).collect();
    let factored: Vec<Vec<(u64, u32)>> = orders.iter().map(|&o| factor_u64(o)).collect();
    let mut gen_orders = Vec::with_capacity(gens.len());
    for gen in gens {
        let mut l = 1u64;
        for (k, comp) in gen.0.iter().enumerate() {
            let o = point_order(&curves[k], comp, orders[k], &factored[k]);
            l = num_integer::lcm(l, o);
        }
        gen_orders.push(l);
    }
    let mut combos = 1u128;
    for &o in &gen_orders {
        combos = combos.saturating_mul(o as u128);
        if combos > cap as u128 {
            return Err(FgError::ResourceLimit);
        }
    }
    // nested enumeration with incremental partial sums
    let mut counters = vec![0u64; gens.len()];
    let mut partial: Vec<ProductPoint<F>> = Vec::with_capacity(gens.len() + 1);
    partial.push(ProductPoint::infinity(g));
    for _ in 0..gens.len() {
        let last = partial.last().expect("nonempty").clone();
        partial.push(last);
    }
    loop {
        if partial[gens.len()] == *target {
            return Ok(Some(counters.iter().map(|&c| BigInt::from(c)).collect()));
        }
        // increment odometer
        let mut idx = gens.len();
        loop {
            if idx == 0 {
                return Ok(None);
            }
            idx -= 1;
            counters[idx] += 1;
            if counters[idx] < gen_orders[idx] {
                partial[idx + 1] =
                    crate::curves::product_add(curves, &partial[idx + 1], &gens[idx]);
                for j in idx + 1..gens.len() {
                    counters[j] = 0;
                    partial[j + 1] = partial[j].clone();
                }
                break;
            }
            counters[idx] = 0;
        }
    }
}
