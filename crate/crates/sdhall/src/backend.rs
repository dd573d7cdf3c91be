//! Finitary hereditary categories presented by small acyclic quivers.
//!
//! A [`Category`] owns the classification of objects into isomorphism
//! classes: for every dimension vector it enumerates all representations
//! and partitions them into orbits of the product of vertex general linear
//! groups, keeping a transporter to the orbit representative.  All counting
//! data (automorphism orders, hom dimensions, subobject filtration counts)
//! is derived from that table and memoized.
//!
//! Plain `F_q` vector spaces are the one-vertex quiver with no arrows; for
//! that backend the closed forms (`|GL_n|`, Gaussian binomials, `q^{mn}`
//! hom counts) are used directly unless `force_generic` is set, in which
//! case the same brute-force route as for genuine quivers is taken — the
//! two routes cross-check each other in the test suites.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{One, Zero};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::finfield::{check_prime, gaussian_binomial, gl_order, FpMatrix};
use crate::k0::{effective_classes_up_to, K0Class};
use crate::quiver::QuiverSpec;
use crate::rep::{
    self, enumerate_reps, hom_basis, transform_rep, Morphism, Rep,
};

/// Session-local identifier of an isomorphism class.  Stable within one
/// `Category`; reports should print names, not raw ids.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IsoClass(pub u32);

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum BackendKind {
    /// `F_q` vector spaces (discrete one-vertex quiver).
    Vect,
    /// Representations of a nontrivial acyclic quiver.
    Quiver,
}

/// Hard limits on brute-force enumerations; exceeding one is an error, not
/// a silent truncation.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Max representations enumerated per dimension vector (`p^#entries`).
    pub max_reps: u64,
    /// Max field-element tuples in hom-space/cocycle enumerations.
    pub max_enum: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_reps: 1 << 20, max_enum: 1 << 18 }
    }
}

struct ClassData {
    rep: Rep,
    k0: K0Class,
    aut: BigUint,
    name: String,
}

struct OrbitTable {
    /// Rep encoding -> (class, g, g_inv) with `g . rep = canonical`.
    members: HashMap<Vec<u32>, (IsoClass, Morphism, Morphism)>,
    classes: Vec<IsoClass>,
}

/// A certified indecomposable: `End` is local, with radical of dimension
/// `end_dim - res_deg` and residue field `F_{q^res_deg}`.
struct IndecData {
    class: IsoClass,
    dims: Vec<usize>,
    end_dim: usize,
    res_deg: usize,
}

#[derive(Default)]
struct State {
    classes: Vec<ClassData>,
    tables: HashMap<Vec<usize>, Arc<OrbitTable>>,
    hom_dims: HashMap<(IsoClass, IsoClass), usize>,
    aut_elems: HashMap<IsoClass, Arc<Vec<Morphism>>>,
    sub_tables: HashMap<IsoClass, Arc<BTreeMap<(IsoClass, IsoClass), BigUint>>>,
    /// Certified indecomposables, in discovery order (ascending total dim).
    indecs: Vec<IndecData>,
    /// Dimension vectors whose classes are formal direct sums of
    /// indecomposables instead of orbit-table entries.
    formal: HashMap<Vec<usize>, Vec<IsoClass>>,
    /// Sorted multiset `[(indec index, multiplicity)]` -> formal class.
    decomp_index: HashMap<Vec<(usize, usize)>, IsoClass>,
    /// Dimension vectors whose isomorphism classes are fully accounted for.
    processed: HashSet<Vec<usize>>,
}

pub struct Category {
    pub spec: QuiverSpec,
    pub q: u32,
    pub kind: BackendKind,
    pub force_generic: bool,
    pub budget: Budget,
    state: Mutex<State>,
}

pub fn biguint_ratio(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// A small generating set of `GL_n(F_p)`: a transvection, an `n`-cycle and
/// (for odd `p`) a primitive scalar in the first slot.
fn gl_generators(n: usize, p: u32) -> Vec<FpMatrix> {
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t = FpMatrix::identity(p, n);
        t.set(0, 1, 1);
        gens.push(t);
        let mut c = FpMatrix::zero(p, n, n);
        for i in 0..n {
            c.set((i + 1) % n, i, 1);
        }
        gens.push(c);
    }
    if n >= 1 && p > 2 {
        let g = (2..p)
            .find(|&g| {
                let mut x = 1u32;
                (1..p - 1).all(|_| {
                    x = (x * g) % p;
                    x != 1
                })
            })
            .expect("primitive root exists");
        let mut d = FpMatrix::identity(p, n);
        d.set(0, 0, g);
        gens.push(d);
    }
    gens
}

/// Orbit tables are enumerated eagerly up to this many representations;
/// larger dimension vectors go through the certified direct-sum route and
/// only fall back to enumeration (within `Budget::max_reps`) when that
/// route cannot account for every representation.
const EAGER_ORBIT: u64 = 1 << 12;

/// Above this many subspace tuples, filtration counts for a Hall-product
/// target are computed from extension cocycles instead of subobject
/// enumeration.
const SUBREP_LIMIT: u64 = 1 << 14;

/// `|GL_n(F_Q)| = prod_{i<n} (Q^n - Q^i)` for a prime power `Q`.
fn gl_order_over(n: usize, big_q: &BigUint) -> BigUint {
    let qn = big_q.pow(n as u32);
    let mut out = BigUint::one();
    for i in 0..n {
        out *= &qn - big_q.pow(i as u32);
    }
    out
}

/// Solve `a x = b` over the rationals by Gaussian elimination; `None` when
/// the system is singular or inconsistent.
fn solve_rational(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                a[r][j] = &a[r][j] - &(&f * &a[col][j]);
            }
            b[r] = &b[r] - &(&f * &b[col]);
        }
    }
    Some(b)
}

impl Category {
    /// The category of finite-dimensional `F_q` vector spaces.
    pub fn vect(q: u32) -> Result<Arc<Category>> {
        check_prime(q)?;
        Ok(Arc::new(Category {
            spec: QuiverSpec::discrete(1),
            q,
            kind: BackendKind::Vect,
            force_generic: false,
            budget: Budget::default(),
            state: Mutex::new(State::default()),
        }))
    }

    /// Same objects as [`Category::vect`] but with every count computed by
    /// generic enumeration instead of closed forms.
    pub fn vect_generic(q: u32) -> Result<Arc<Category>> {
        let mut cat = Arc::try_unwrap(Category::vect(q)?).ok().unwrap();
        cat.force_generic = true;
        Ok(Arc::new(cat))
    }

    /// Representations of an acyclic quiver over `F_q`.
    pub fn quiver(spec: QuiverSpec, q: u32) -> Result<Arc<Category>> {
        spec.validate()?;
        check_prime(q)?;
        let kind = if spec.arrows.is_empty() && spec.vertices == 1 {
            BackendKind::Vect
        } else {
            BackendKind::Quiver
        };
        Ok(Arc::new(Category {
            spec,
            q,
            kind,
            force_generic: false,
            budget: Budget::default(),
            state: Mutex::new(State::default()),
        }))
    }

    pub fn k0_rank(&self) -> usize {
        self.spec.vertices
    }

    fn closed_forms(&self) -> bool {
        self.kind == BackendKind::Vect && !self.force_generic
    }

    /// Euler form `<x, y> = sum_i x_i y_i - sum_{a: s->t} x_s y_t`.
    pub fn euler_form(&self, x: &K0Class, y: &K0Class) -> i64 {
        let mut out = 0i64;
        for i in 0..self.spec.vertices {
            out += x.0[i] * y.0[i];
        }
        for &(s, t) in &self.spec.arrows {
            out -= x.0[s] * y.0[t];
        }
        out
    }

    /// Symmetrized Euler form `(x, y) = <x,y> + <y,x>`.
    pub fn sym_form(&self, x: &K0Class, y: &K0Class) -> i64 {
        self.euler_form(x, y) + self.euler_form(y, x)
    }

    /// Build (or fetch) the orbit table for a dimension vector.
    fn table(&self, dims: &[usize]) -> Result<Arc<OrbitTable>> {
        if let Some(t) = self.state.lock().unwrap().tables.get(dims) {
            return Ok(t.clone());
        }
        let p = self.q;
        let entries: usize =
            self.spec.arrows.iter().map(|&(s, t)| dims[s] * dims[t]).sum();
        let count = (p as u64).checked_pow(entries as u32).filter(|&c| c <= self.budget.max_reps);
        if count.is_none() {
            return Err(Error::Budget(format!(
                "{p}^{entries} representations for dimension vector {dims:?}"
            )));
        }
        let reps = enumerate_reps(&self.spec, p, dims);
        // Generators of prod_i GL_{d_i}, one vertex at a time.
        let mut gens: Vec<(Morphism, Morphism)> = Vec::new();
        for v in 0..self.spec.vertices {
            for g in gl_generators(dims[v], p) {
                let mut m = rep::identity_morphism(p, dims);
                let g_inv = g.inverse().expect("generator invertible");
                m[v] = g;
                let mut m_inv = rep::identity_morphism(p, dims);
                m_inv[v] = g_inv;
                gens.push((m, m_inv));
            }
        }
        let group_order: BigUint =
            dims.iter().map(|&d| gl_order(d, p)).product();

        let mut members: HashMap<Vec<u32>, (IsoClass, Morphism, Morphism)> =
            HashMap::with_capacity(reps.len());
        let mut table_classes = Vec::new();
        let mut new_classes: Vec<ClassData> = Vec::new();
        // Reserve ids under the lock at the end; build with offsets first.
        for start in &reps {
            let enc = start.encode();
            if members.contains_key(&enc) {
                continue;
            }
            let local = new_classes.len();
            let class = IsoClass(u32::MAX - local as u32); // patched below
            let id_mor = rep::identity_morphism(p, dims);
            let mut queue = vec![(start.clone(), id_mor.clone(), id_mor)];
            members.insert(enc, (class, queue[0].1.clone(), queue[0].2.clone()));
            let mut orbit = 1u64;
            while let Some((r, h, h_inv)) = queue.pop() {
                for (g, g_inv) in &gens {
                    let r2 = transform_rep(&self.spec, &r, g, g_inv);
                    let enc2 = r2.encode();
                    if !members.contains_key(&enc2) {
                        // g.(h.canonical) = r2, so the transporter back to
                        // the canonical rep is (g h)^{-1} = h_inv g_inv.
                        let h2: Morphism = rep::compose(g, &h);
                        let h2_inv: Morphism = rep::compose(&h_inv, g_inv);
                        members.insert(enc2, (class, h2_inv.clone(), h2.clone()));
                        orbit += 1;
                        queue.push((r2, h2, h2_inv));
                    }
                }
            }
            let aut = &group_order / BigUint::from(orbit);
            new_classes.push(ClassData {
                rep: start.clone(),
                k0: K0Class(dims.iter().map(|&d| d as i64).collect()),
                aut,
                name: String::new(), // patched below
            });
        }

        let mut st = self.state.lock().unwrap();
        if let Some(t) = st.tables.get(dims) {
            return Ok(t.clone()); // raced with another builder
        }
        let base = st.classes.len() as u32;
        for (local, mut data) in new_classes.into_iter().enumerate() {
            data.name = if self.kind == BackendKind::Vect {
                format!("V{}", data.rep.total_dim())
            } else {
                let ds: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                format!("X({})#{local}", ds.join(","))
            };
            st.classes.push(data);
            table_classes.push(IsoClass(base + local as u32));
        }
        for entry in members.values_mut() {
            let local = (u32::MAX - entry.0 .0) as usize;
            entry.0 = IsoClass(base + local as u32);
        }
        let table = Arc::new(OrbitTable { members, classes: table_classes });
        st.tables.insert(dims.to_vec(), table.clone());
        Ok(table)
    }

    fn orbit_entries(&self, dims: &[usize]) -> usize {
        self.spec.arrows.iter().map(|&(s, t)| dims[s] * dims[t]).sum()
    }

    /// All multisets `[(indec index, multiplicity)]` of the known
    /// indecomposables whose dimension vectors sum to `dims`.
    fn multiset_candidates(
        indec_dims: &[Vec<usize>],
        dims: &[usize],
    ) -> Vec<Vec<(usize, usize)>> {
        fn go(
            indec_dims: &[Vec<usize>],
            idx: usize,
            rest: &mut Vec<usize>,
            acc: &mut Vec<(usize, usize)>,
            out: &mut Vec<Vec<(usize, usize)>>,
        ) {
            if rest.iter().all(|&d| d == 0) {
                out.push(acc.clone());
                return;
            }
            if idx == indec_dims.len() {
                return;
            }
            let d = &indec_dims[idx];
            let max = rest
                .iter()
                .zip(d)
                .filter(|&(_, &di)| di > 0)
                .map(|(&r, &di)| r / di)
                .min()
                .unwrap_or(0);
            for mult in (0..=max).rev() {
                for (r, &di) in rest.iter_mut().zip(d) {
                    *r -= mult * di;
                }
                if mult > 0 {
                    acc.push((idx, mult));
                }
                go(indec_dims, idx + 1, rest, acc, out);
                if mult > 0 {
                    acc.pop();
                }
                for (r, &di) in rest.iter_mut().zip(d) {
                    *r += mult * di;
                }
            }
        }
        let mut out = Vec::new();
        let mut rest = dims.to_vec();
        go(indec_dims, 0, &mut rest, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// The canonical representative of a formal class: the direct sum of
    /// indecomposable representatives in registry order.
    fn sum_rep(&self, cand: &[(usize, usize)]) -> Rep {
        let (q, v) = (self.q, self.spec.vertices);
        let mut out = Rep::zero(&self.spec, q, vec![0; v]);
        let st = self.state.lock().unwrap();
        for &(idx, mult) in cand {
            let part = st.classes[st.indecs[idx].class.0 as usize].rep.clone();
            for _ in 0..mult {
                out = out.direct_sum(&part, &self.spec);
            }
        }
        out
    }

    /// `|Aut|` of a direct sum of indecomposables with local endomorphism
    /// rings: units are the matrices invertible modulo the radical, so the
    /// order is `q^{off-diagonal hom dims + radical dims}` times the orders
    /// of `GL_{mult}` over each residue field.
    fn aut_of_multiset(&self, cand: &[(usize, usize)]) -> Result<BigUint> {
        let parts: Vec<(IsoClass, usize, usize)> = {
            let st = self.state.lock().unwrap();
            cand.iter()
                .map(|&(idx, mult)| {
                    let d = &st.indecs[idx];
                    (d.class, d.end_dim - d.res_deg, mult)
                })
                .collect()
        };
        let res_degs: Vec<usize> = {
            let st = self.state.lock().unwrap();
            cand.iter().map(|&(idx, _)| st.indecs[idx].res_deg).collect()
        };
        let mut exp = 0usize;
        for (i, &(ci, rad, mi)) in parts.iter().enumerate() {
            exp += rad * mi * mi;
            for (j, &(cj, _, mj)) in parts.iter().enumerate() {
                if i != j {
                    exp += mi * mj * self.hom_dim(ci, cj)?;
                }
            }
        }
        let mut out = BigUint::from(self.q).pow(exp as u32);
        for (&(_, _, m), &e) in parts.iter().zip(&res_degs) {
            out *= gl_order_over(m, &BigUint::from(self.q).pow(e as u32));
        }
        Ok(out)
    }

    /// Certify that an orbit class is indecomposable: its automorphism
    /// count must have the shape `q^d - q^{d-e}` forced by a local
    /// endomorphism ring with residue field `F_{q^e}`.
    fn certify_indec(&self, class: IsoClass) -> Result<(usize, usize)> {
        let d = self.hom_dim(class, class)?;
        let aut = self.aut_count(class);
        let qd = BigUint::from(self.q).pow(d as u32);
        for e in 1..=d {
            if &qd - BigUint::from(self.q).pow((d - e) as u32) == aut {
                return Ok((d, e));
            }
        }
        Err(Error::Internal(format!(
            "class {} was not matched by any direct sum yet is decomposable",
            self.name_of(class)
        )))
    }

    /// Account for every isomorphism class of the given dimension vector,
    /// either by an eager orbit table (small), by certified direct sums of
    /// known indecomposables (the orbit-counting mass formula proves
    /// completeness), or by a budgeted full enumeration.
    fn process_dims(&self, dims: &[usize]) -> Result<()> {
        if self.state.lock().unwrap().processed.contains(dims) {
            return Ok(());
        }
        let p = self.q;
        let entries = self.orbit_entries(dims);
        let count = (p as u64).checked_pow(entries as u32);
        let (indec_dims, snapshot_len): (Vec<Vec<usize>>, usize) = {
            let st = self.state.lock().unwrap();
            (st.indecs.iter().map(|d| d.dims.clone()).collect(), st.indecs.len())
        };
        let cands = Self::multiset_candidates(&indec_dims, dims);

        let enumerate = |budget: u64| -> Result<()> {
            if count.is_none() || count.unwrap() > budget {
                return Err(Error::Budget(format!(
                    "{p}^{entries} representations for dimension vector {dims:?} \
                     and the direct-sum census is incomplete"
                )));
            }
            let table = self.table(dims)?;
            let mut seen: HashSet<IsoClass> = HashSet::new();
            for cand in &cands {
                let rep = self.sum_rep(cand);
                let class = table
                    .members
                    .get(&rep.encode())
                    .ok_or_else(|| Error::Internal("direct sum missing from orbit table".into()))?
                    .0;
                seen.insert(class);
            }
            let mut new_indecs = Vec::new();
            for &class in &table.classes {
                if !seen.contains(&class) {
                    let (end_dim, res_deg) = self.certify_indec(class)?;
                    new_indecs.push(IndecData { class, dims: dims.to_vec(), end_dim, res_deg });
                }
            }
            let mut st = self.state.lock().unwrap();
            if !st.processed.contains(dims) {
                debug_assert_eq!(st.indecs.len(), snapshot_len);
                st.indecs.extend(new_indecs);
                st.processed.insert(dims.to_vec());
            }
            Ok(())
        };

        if count.is_some_and(|c| c <= EAGER_ORBIT) {
            return enumerate(EAGER_ORBIT);
        }

        // Mass certificate: the candidate orbits exhaust all q^entries
        // representations exactly when no indecomposable is missing.
        let group: BigUint = dims.iter().map(|&d| gl_order(d, p)).product();
        let total = BigUint::from(p).pow(entries as u32);
        let mut mass = BigRational::zero();
        let mut auts = Vec::with_capacity(cands.len());
        for cand in &cands {
            let aut = self.aut_of_multiset(cand)?;
            mass += biguint_ratio(&group) / biguint_ratio(&aut);
            auts.push(aut);
        }
        if mass != biguint_ratio(&total) {
            return enumerate(self.budget.max_reps);
        }
        let mut datas = Vec::with_capacity(cands.len());
        for (cand, aut) in cands.iter().zip(auts) {
            datas.push(ClassData {
                rep: self.sum_rep(cand),
                k0: K0Class(dims.iter().map(|&d| d as i64).collect()),
                aut,
                name: String::new(),
            });
        }
        let mut st = self.state.lock().unwrap();
        if st.processed.contains(dims) {
            return Ok(());
        }
        debug_assert_eq!(st.indecs.len(), snapshot_len);
        let base = st.classes.len() as u32;
        let mut ids = Vec::with_capacity(datas.len());
        for (local, (cand, mut data)) in cands.into_iter().zip(datas).enumerate() {
            let ds: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
            data.name = format!("X({})#{local}", ds.join(","));
            st.classes.push(data);
            let id = IsoClass(base + local as u32);
            ids.push(id);
            st.decomp_index.insert(cand, id);
        }
        st.formal.insert(dims.to_vec(), ids);
        st.processed.insert(dims.to_vec());
        Ok(())
    }

    /// Process every dimension vector componentwise below `dims`, in
    /// increasing total dimension, so the indecomposable registry is
    /// complete for direct-sum classification at `dims`.
    fn ensure_processed(&self, dims: &[usize]) -> Result<()> {
        if self.state.lock().unwrap().processed.contains(dims) {
            return Ok(());
        }
        let bound = K0Class(dims.iter().map(|&d| d as i64).collect());
        let mut below: Vec<K0Class> = effective_classes_up_to(&bound);
        below.sort_by_key(|c| (c.total(), c.0.clone()));
        for c in below {
            let d: Vec<usize> = c.0.iter().map(|&x| x as usize).collect();
            self.process_dims(&d)?;
        }
        Ok(())
    }

    /// Classify a representation of a formally processed dimension vector:
    /// hom dimensions from each indecomposable determine the multiplicities
    /// (the indecomposable hom matrix must be invertible), and the multiset
    /// indexes the class.
    fn classify_by_homs(&self, r: &Rep) -> Result<IsoClass> {
        let parts: Vec<(usize, IsoClass, Rep)> = {
            let st = self.state.lock().unwrap();
            st.indecs
                .iter()
                .enumerate()
                .filter(|(_, d)| d.dims.iter().zip(&r.dims).all(|(&a, &b)| a <= b))
                .map(|(i, d)| (i, d.class, st.classes[d.class.0 as usize].rep.clone()))
                .collect()
        };
        let n = parts.len();
        let mut h = Vec::with_capacity(n);
        for (_, _, rep) in &parts {
            let dim = hom_basis(&self.spec, self.q, rep, r).len();
            h.push(BigRational::from_integer(BigInt::from(dim)));
        }
        let mut mat = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let d = self.hom_dim(parts[i].1, parts[j].1)?;
                mat[i][j] = BigRational::from_integer(BigInt::from(d));
            }
        }
        let sol = solve_rational(mat, h).ok_or_else(|| {
            Error::Budget("hom dimensions do not determine multiplicities here".into())
        })?;
        let mut key = Vec::new();
        for ((idx, _, _), m) in parts.iter().zip(&sol) {
            if !m.is_integer() || m < &BigRational::zero() {
                return Err(Error::Internal("non-integral summand multiplicity".into()));
            }
            let m: usize = m.to_integer().try_into().map_err(|_| {
                Error::Internal("summand multiplicity out of range".into())
            })?;
            if m > 0 {
                key.push((*idx, m));
            }
        }
        self.state
            .lock()
            .unwrap()
            .decomp_index
            .get(&key)
            .copied()
            .ok_or_else(|| Error::Internal("decomposition missing from formal census".into()))
    }

    /// Classify an arbitrary representation: its class plus a transporter
    /// pair `(g, g_inv)` with `g . rep = canonical`.
    pub fn classify_rep(&self, r: &Rep) -> Result<(IsoClass, Morphism, Morphism)> {
        let table = self.table(&r.dims)?;
        let (class, g, g_inv) = table
            .members
            .get(&r.encode())
            .ok_or_else(|| Error::Internal("representation missing from orbit table".into()))?;
        Ok((*class, g.clone(), g_inv.clone()))
    }

    /// The class alone, without a transporter; unlike [`classify_rep`] this
    /// also works for dimension vectors whose classes are certified direct
    /// sums rather than orbit-table entries.
    ///
    /// [`classify_rep`]: Category::classify_rep
    pub fn class_of_rep(&self, r: &Rep) -> Result<IsoClass> {
        if self.closed_forms() {
            return Ok(self.classify_rep(r)?.0);
        }
        {
            let st = self.state.lock().unwrap();
            if let Some(t) = st.tables.get(&r.dims) {
                return t
                    .members
                    .get(&r.encode())
                    .map(|e| e.0)
                    .ok_or_else(|| Error::Internal("representation missing from orbit table".into()));
            }
        }
        self.ensure_processed(&r.dims)?;
        {
            let st = self.state.lock().unwrap();
            if let Some(t) = st.tables.get(&r.dims) {
                return t
                    .members
                    .get(&r.encode())
                    .map(|e| e.0)
                    .ok_or_else(|| Error::Internal("representation missing from orbit table".into()));
            }
        }
        self.classify_by_homs(r)
    }

    /// The number of subobject tuples a filtration count at this class
    /// would enumerate; above [`SUBREP_LIMIT`] Hall numbers switch to the
    /// extension-cocycle route.
    pub fn hall_target_heavy(&self, c: &K0Class) -> bool {
        if self.closed_forms() {
            return false;
        }
        let mut cost = BigUint::one();
        for &d in &c.0 {
            let mut subspaces = BigUint::zero();
            for k in 0..=(d as usize) {
                subspaces += gaussian_binomial(d as usize, k, self.q);
            }
            cost *= subspaces;
        }
        cost > BigUint::from(SUBREP_LIMIT)
    }

    /// The canonical representative of a class.
    pub fn rep_of(&self, m: IsoClass) -> Rep {
        self.state.lock().unwrap().classes[m.0 as usize].rep.clone()
    }

    /// The class in `K_0` (the dimension vector).
    pub fn class_of(&self, m: IsoClass) -> K0Class {
        self.state.lock().unwrap().classes[m.0 as usize].k0.clone()
    }

    pub fn name_of(&self, m: IsoClass) -> String {
        self.state.lock().unwrap().classes[m.0 as usize].name.clone()
    }

    /// `a_M = |Aut(M)|`, from orbit-stabilizer on the orbit table (closed
    /// form `|GL_n|` for plain vector spaces).
    pub fn aut_count(&self, m: IsoClass) -> BigUint {
        self.state.lock().unwrap().classes[m.0 as usize].aut.clone()
    }

    /// The zero object.
    pub fn zero_object(&self) -> Result<IsoClass> {
        let dims = vec![0usize; self.spec.vertices];
        let z = Rep::zero(&self.spec, self.q, dims);
        self.class_of_rep(&z)
    }

    /// All classes with the given `K_0` class (must be effective).
    pub fn objects_of_class(&self, c: &K0Class) -> Result<Vec<IsoClass>> {
        if !c.is_effective() {
            return Ok(Vec::new());
        }
        let dims: Vec<usize> = c.0.iter().map(|&x| x as usize).collect();
        if self.closed_forms() {
            return Ok(self.table(&dims)?.classes.clone());
        }
        self.ensure_processed(&dims)?;
        let st = self.state.lock().unwrap();
        if let Some(t) = st.tables.get(&dims) {
            return Ok(t.classes.clone());
        }
        Ok(st.formal[&dims].clone())
    }

    /// All classes with `K_0` class bounded componentwise, in a
    /// deterministic order (lexicographic dimension vectors, then orbit
    /// enumeration order).
    pub fn objects_up_to(&self, bound: &K0Class) -> Result<Vec<IsoClass>> {
        let mut out = Vec::new();
        for c in effective_classes_up_to(bound) {
            out.extend(self.objects_of_class(&c)?);
        }
        Ok(out)
    }

    pub fn hom_dim(&self, m: IsoClass, n: IsoClass) -> Result<usize> {
        if let Some(&d) = self.state.lock().unwrap().hom_dims.get(&(m, n)) {
            return Ok(d);
        }
        let d = if self.closed_forms() {
            (self.class_of(m).total() * self.class_of(n).total()) as usize
        } else {
            hom_basis(&self.spec, self.q, &self.rep_of(m), &self.rep_of(n)).len()
        };
        self.state.lock().unwrap().hom_dims.insert((m, n), d);
        Ok(d)
    }

    /// `|Hom(M, N)| = q^{dim Hom}`.
    pub fn hom_count(&self, m: IsoClass, n: IsoClass) -> Result<BigUint> {
        Ok(BigUint::from(self.q).pow(self.hom_dim(m, n)? as u32))
    }

    /// All automorphisms of the canonical representative, enumerated from
    /// the endomorphism basis (budget-guarded).
    pub fn aut_elements(&self, m: IsoClass) -> Result<Arc<Vec<Morphism>>> {
        if let Some(a) = self.state.lock().unwrap().aut_elems.get(&m) {
            return Ok(a.clone());
        }
        let r = self.rep_of(m);
        let basis = hom_basis(&self.spec, self.q, &r, &r);
        let combos = (self.q as u64).checked_pow(basis.len() as u32);
        if combos.is_none() || combos.unwrap() > self.budget.max_enum {
            return Err(Error::Budget(format!(
                "{}^{} endomorphism combinations for {}",
                self.q,
                basis.len(),
                self.name_of(m)
            )));
        }
        let mut out = Vec::new();
        for coeffs in crate::finfield::enumerate_vectors(basis.len(), self.q) {
            let mut f: Morphism =
                r.dims.iter().map(|&d| FpMatrix::zero(self.q, d, d)).collect();
            for (b, &c) in basis.iter().zip(&coeffs) {
                if c == 0 {
                    continue;
                }
                for (fi, bi) in f.iter_mut().zip(b) {
                    let mut scaled = bi.clone();
                    for i in 0..scaled.rows {
                        for j in 0..scaled.cols {
                            scaled.set(i, j, (bi.get(i, j) * c) % self.q);
                        }
                    }
                    *fi = fi.add(&scaled);
                }
            }
            if rep::morphism_is_iso(&f) {
                out.push(f);
            }
        }
        let arc = Arc::new(out);
        self.state.lock().unwrap().aut_elems.insert(m, arc.clone());
        Ok(arc)
    }

    /// A generating set of `Aut(M)` acting on the canonical representative.
    /// For plain vector spaces this is the small `GL_n` generating set;
    /// otherwise the full (small) automorphism group is returned.
    pub fn aut_generators(&self, m: IsoClass) -> Result<Vec<Morphism>> {
        if self.kind == BackendKind::Vect {
            let n = self.class_of(m).total() as usize;
            return Ok(gl_generators(n, self.q).into_iter().map(|g| vec![g]).collect());
        }
        Ok(self.aut_elements(m)?.as_ref().clone())
    }

    /// Filtration counts of `R`: map `(sub, quotient) -> #subobjects`.
    pub fn sub_quot_table(
        &self,
        r: IsoClass,
    ) -> Result<Arc<BTreeMap<(IsoClass, IsoClass), BigUint>>> {
        if let Some(t) = self.state.lock().unwrap().sub_tables.get(&r) {
            return Ok(t.clone());
        }
        let mut out: BTreeMap<(IsoClass, IsoClass), BigUint> = BTreeMap::new();
        if self.closed_forms() {
            let n = self.class_of(r).total() as usize;
            for k in 0..=n {
                let sub = self.objects_of_class(&K0Class(vec![k as i64]))?[0];
                let quot = self.objects_of_class(&K0Class(vec![(n - k) as i64]))?[0];
                out.insert((sub, quot), gaussian_binomial(n, k, self.q));
            }
        } else {
            let rep = self.rep_of(r);
            for tuple in rep::subrep_tuples(&self.spec, self.q, &rep) {
                let (s, _) = rep::sub_rep(&self.spec, &rep, &tuple);
                let (qt, _, _) = rep::quotient_rep(&self.spec, &rep, &tuple);
                let sc = self.class_of_rep(&s)?;
                let qc = self.class_of_rep(&qt)?;
                *out.entry((sc, qc)).or_insert_with(|| BigUint::from(0u32)) += BigUint::one();
            }
        }
        let arc = Arc::new(out);
        self.state.lock().unwrap().sub_tables.insert(r, arc.clone());
        Ok(arc)
    }

    /// `F^R_{MN}`: the number of subobjects `U <= R` with `U` isomorphic to
    /// `N` and `R/U` isomorphic to `M`.
    pub fn sub_quotient_count(&self, r: IsoClass, m: IsoClass, n: IsoClass) -> Result<BigUint> {
        Ok(self
            .sub_quot_table(r)?
            .get(&(n, m))
            .cloned()
            .unwrap_or_else(|| BigUint::from(0u32)))
    }

    /// The class of `M + N` (direct sum).
    pub fn direct_sum_class(&self, m: IsoClass, n: IsoClass) -> Result<IsoClass> {
        let s = self.rep_of(m).direct_sum(&self.rep_of(n), &self.spec);
        self.class_of_rep(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vect_classification_and_closed_forms() {
        let cat = Category::vect(2).unwrap();
        let objs = cat.objects_up_to(&K0Class(vec![3])).unwrap();
        assert_eq!(objs.len(), 4); // V0..V3
        let v2 = objs[2];
        assert_eq!(cat.name_of(v2), "V2");
        assert_eq!(cat.aut_count(v2), BigUint::from(6u32));
        assert_eq!(cat.hom_count(objs[1], objs[1]).unwrap(), BigUint::from(2u32));
        // F^{V2}_{V1 V1} = [2 choose 1]_2 = 3.
        assert_eq!(
            cat.sub_quotient_count(v2, objs[1], objs[1]).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(cat.euler_form(&K0Class(vec![2]), &K0Class(vec![3])), 6);
    }

    #[test]
    fn generic_route_matches_closed_forms_on_vect() {
        let fast = Category::vect(3).unwrap();
        let slow = Category::vect_generic(3).unwrap();
        for n in 0..=3usize {
            let c = K0Class(vec![n as i64]);
            let f = fast.objects_of_class(&c).unwrap()[0];
            let s = slow.objects_of_class(&c).unwrap()[0];
            assert_eq!(fast.aut_count(f), slow.aut_count(s));
            for m in 0..=3usize {
                let cm = K0Class(vec![m as i64]);
                let fm = fast.objects_of_class(&cm).unwrap()[0];
                let sm = slow.objects_of_class(&cm).unwrap()[0];
                assert_eq!(fast.hom_dim(f, fm).unwrap(), slow.hom_dim(s, sm).unwrap());
                if m <= n {
                    let fq = fast.objects_of_class(&(&c - &cm)).unwrap()[0];
                    let sq = slow.objects_of_class(&(&c - &cm)).unwrap()[0];
                    assert_eq!(
                        fast.sub_quotient_count(f, fq, fm).unwrap(),
                        slow.sub_quotient_count(s, sq, sm).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn a2_classification() {
        let cat = Category::quiver(QuiverSpec::a2(), 2).unwrap();
        // Dimension vector (1,1) has two classes: S1+S2 and P1.
        let objs = cat.objects_of_class(&K0Class(vec![1, 1])).unwrap();
        assert_eq!(objs.len(), 2);
        // Both have automorphism counts from orbit-stabilizer; the
        // decomposable one has |Aut| = 1 (diagonal scalars over F_2), the
        // indecomposable P1 likewise |Aut| = 1; orbit sizes 1 and 1.
        for &o in &objs {
            assert_eq!(cat.aut_count(o), BigUint::from(1u32));
        }
        // Simples.
        let s1 = cat.objects_of_class(&K0Class(vec![1, 0])).unwrap()[0];
        let s2 = cat.objects_of_class(&K0Class(vec![0, 1])).unwrap()[0];
        // P1 is the class whose sub/quot table has no S1 subobject.
        let p1 = objs
            .iter()
            .copied()
            .find(|&o| {
                cat.sub_quotient_count(o, s2, s1).unwrap() == BigUint::from(0u32)
            })
            .expect("indecomposable (1,1) class");
        let split = objs.iter().copied().find(|&o| o != p1).unwrap();
        assert_eq!(cat.sub_quotient_count(p1, s1, s2).unwrap(), BigUint::from(1u32));
        assert_eq!(cat.sub_quotient_count(split, s1, s2).unwrap(), BigUint::from(1u32));
        assert_eq!(cat.sub_quotient_count(split, s2, s1).unwrap(), BigUint::from(1u32));
        // Euler form: <S1, S2> = -1 (one arrow), <S2, S1> = 0.
        let c1 = cat.class_of(s1);
        let c2 = cat.class_of(s2);
        assert_eq!(cat.euler_form(&c1, &c2), -1);
        assert_eq!(cat.euler_form(&c2, &c1), 0);
        // hom counts from the orbit route.
        assert_eq!(cat.hom_count(s1, s2).unwrap(), BigUint::from(1u32));
        assert_eq!(cat.hom_count(s2, p1).unwrap(), BigUint::from(2u32));
        // Aut elements agree with orbit-stabilizer aut counts.
        for &o in &[s1, s2, p1, split] {
            assert_eq!(
                BigUint::from(cat.aut_elements(o).unwrap().len()),
                cat.aut_count(o)
            );
        }
    }

    #[test]
    fn transporters_move_reps_to_canonical() {
        let cat = Category::quiver(QuiverSpec::a2(), 3).unwrap();
        for r in enumerate_reps(&QuiverSpec::a2(), 3, &[2, 1]) {
            let (class, g, g_inv) = cat.classify_rep(&r).unwrap();
            let moved = transform_rep(&cat.spec, &r, &g, &g_inv);
            assert_eq!(moved, cat.rep_of(class));
        }
    }
}
