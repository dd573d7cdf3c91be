//! Ringel-Hall algebras of a backend category: structure constants by two
//! independent routes, the twisted product, Green's coproduct, and
//! exhaustive verifiers for associativity, Green's formula and the
//! bialgebra axioms.

use num::bigint::BigUint;
use num::traits::One;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::backend::{biguint_ratio, Category, IsoClass};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::finfield::{enumerate_vectors, FpMatrix};
use crate::k0::{effective_classes_up_to, K0Class};
use crate::rep::extension_middle;
use crate::report::SuiteOutcome;

/// A finitely supported linear combination of isomorphism classes.
#[derive(Clone, Debug, PartialEq)]
pub struct HallElement {
    pub q: u32,
    pub terms: BTreeMap<IsoClass, Coeff>,
}

impl HallElement {
    pub fn zero(q: u32) -> HallElement {
        HallElement { q, terms: BTreeMap::new() }
    }

    pub fn basis(q: u32, m: IsoClass) -> HallElement {
        let mut e = HallElement::zero(q);
        e.add_term(m, Coeff::one(q));
        e
    }

    pub fn add_term(&mut self, m: IsoClass, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(|| Coeff::zero(self.q));
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &HallElement, c: &Coeff) {
        for (m, x) in &other.terms {
            self.add_term(*m, x * c);
        }
    }

    pub fn coeff(&self, m: IsoClass) -> Coeff {
        self.terms.get(&m).cloned().unwrap_or_else(|| Coeff::zero(self.q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A finitely supported element of the tensor square.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    pub q: u32,
    pub terms: BTreeMap<(IsoClass, IsoClass), Coeff>,
}

impl TensorElement {
    pub fn zero(q: u32) -> TensorElement {
        TensorElement { q, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, key: (IsoClass, IsoClass), c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(|| Coeff::zero(self.q));
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The (twisted) Hall algebra of a category.
pub struct HallAlgebra {
    pub cat: Arc<Category>,
    products: Mutex<HashMap<(IsoClass, IsoClass, bool), HallElement>>,
}

impl HallAlgebra {
    pub fn new(cat: Arc<Category>) -> HallAlgebra {
        HallAlgebra { cat, products: Mutex::new(HashMap::new()) }
    }

    pub fn q(&self) -> u32 {
        self.cat.q
    }

    fn rational(&self, n: &BigUint) -> Coeff {
        Coeff::from_rational(self.q(), biguint_ratio(n))
    }

    /// `a_M` as a coefficient.
    pub fn aut_coeff(&self, m: IsoClass) -> Coeff {
        self.rational(&self.cat.aut_count(m))
    }

    fn vpow(&self, e: i64) -> Coeff {
        Coeff::v_pow(self.q(), e)
    }

    /// Hall number `h^R_{MN}` via filtration counts and the
    /// Riedtmann-Peng conversion `h = F^R_{MN} a_M a_N / a_R`.
    pub fn hall_number(&self, m: IsoClass, n: IsoClass, r: IsoClass) -> Result<Coeff> {
        let cm = self.cat.class_of(m);
        let cn = self.cat.class_of(n);
        if &(&cm + &cn) != &self.cat.class_of(r) {
            return Ok(Coeff::zero(self.q()));
        }
        if self.cat.hall_target_heavy(&self.cat.class_of(r)) {
            // Subobject enumeration at this class would be too large;
            // count extension cocycles instead (the two routes agree, which
            // is itself verified on every triple within the small bounds).
            return self.hall_number_direct(m, n, r);
        }
        let f = self.cat.sub_quotient_count(r, m, n)?;
        if f == BigUint::from(0u32) {
            return Ok(Coeff::zero(self.q()));
        }
        let num = self.rational(&(f * self.cat.aut_count(m) * self.cat.aut_count(n)));
        num.try_div(&self.rational(&self.cat.aut_count(r)))
    }

    /// Hall number by the definition: count extension cocycles with the
    /// prescribed middle term.  For a hereditary path algebra every tuple
    /// `z_a: M_{s(a)} -> N_{t(a)}` yields an extension with middle
    /// `[[N_a, z_a],[0, M_a]]`; equivalent extensions differ by a
    /// coboundary, and dividing the raw middle-term count by the full
    /// cochain count `q^{sum_i m_i n_i}` gives
    /// `|Ext^1(M,N)_R| / |Hom(M,N)|` directly.
    pub fn hall_number_direct(&self, m: IsoClass, n: IsoClass, r: IsoClass) -> Result<Coeff> {
        let cm = self.cat.class_of(m);
        let cn = self.cat.class_of(n);
        if &(&cm + &cn) != &self.cat.class_of(r) {
            return Ok(Coeff::zero(self.q()));
        }
        let mrep = self.cat.rep_of(m);
        let nrep = self.cat.rep_of(n);
        let spec = &self.cat.spec;
        let q = self.q();
        let shapes: Vec<(usize, usize)> = spec
            .arrows
            .iter()
            .map(|&(s, t)| (nrep.dims[t], mrep.dims[s]))
            .collect();
        let entries: usize = shapes.iter().map(|&(r, c)| r * c).sum();
        let combos = (q as u64).checked_pow(entries as u32);
        if combos.is_none() || combos.unwrap() > self.cat.budget.max_enum {
            return Err(Error::Budget(format!(
                "{q}^{entries} extension cocycles for ({}, {})",
                self.cat.name_of(m),
                self.cat.name_of(n)
            )));
        }
        let mut count = BigUint::from(0u32);
        for flat in enumerate_vectors(entries, q) {
            let mut z = Vec::with_capacity(shapes.len());
            let mut off = 0;
            for &(rows, cols) in &shapes {
                let mut mat = FpMatrix::zero(q, rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        mat.set(i, j, flat[off]);
                        off += 1;
                    }
                }
                z.push(mat);
            }
            let middle = extension_middle(spec, &mrep, &nrep, &z);
            if self.cat.class_of_rep(&middle)? == r {
                count += BigUint::one();
            }
        }
        let cochains: u32 = mrep
            .dims
            .iter()
            .zip(&nrep.dims)
            .map(|(&a, &b)| (a * b) as u32)
            .sum();
        self.rational(&count)
            .try_div(&self.rational(&BigUint::from(q).pow(cochains)))
    }

    /// Iterated Hall number `h^K_{M_1 M_2 ... M_n}`, defined recursively by
    /// summing over the class-forced middle object.
    pub fn iterated_hall_number(&self, ms: &[IsoClass], k: IsoClass) -> Result<Coeff> {
        match ms.len() {
            0 => Ok(if self.cat.class_of(k).is_zero() {
                Coeff::one(self.q())
            } else {
                Coeff::zero(self.q())
            }),
            1 => Ok(if ms[0] == k { Coeff::one(self.q()) } else { Coeff::zero(self.q()) }),
            _ => {
                let rest_class = self
                    .cat
                    .class_of(k)
                    .clone();
                let rest_class = &rest_class - &self.cat.class_of(ms[0]);
                let mut out = Coeff::zero(self.q());
                for t in self.cat.objects_of_class(&rest_class)? {
                    let head = self.hall_number(ms[0], t, k)?;
                    if head.is_zero() {
                        continue;
                    }
                    let tail = self.iterated_hall_number(&ms[1..], t)?;
                    out = &out + &(&head * &tail);
                }
                Ok(out)
            }
        }
    }

    /// `[M] * [N]` in the (optionally twisted) Hall algebra.
    pub fn product_classes(&self, m: IsoClass, n: IsoClass, twisted: bool) -> Result<HallElement> {
        if let Some(p) = self.products.lock().unwrap().get(&(m, n, twisted)) {
            return Ok(p.clone());
        }
        let out = self.product_classes_uncached(m, n, twisted)?;
        self.products.lock().unwrap().insert((m, n, twisted), out.clone());
        Ok(out)
    }

    fn product_classes_uncached(&self, m: IsoClass, n: IsoClass, twisted: bool) -> Result<HallElement> {
        let cm = self.cat.class_of(m);
        let cn = self.cat.class_of(n);
        let twist = if twisted {
            self.vpow(self.cat.euler_form(&cm, &cn))
        } else {
            Coeff::one(self.q())
        };
        let mut out = HallElement::zero(self.q());
        for r in self.cat.objects_of_class(&(&cm + &cn))? {
            let h = self.hall_number(m, n, r)?;
            out.add_term(r, &twist * &h);
        }
        Ok(out)
    }

    pub fn product(&self, x: &HallElement, y: &HallElement, twisted: bool) -> Result<HallElement> {
        let mut out = HallElement::zero(self.q());
        for (m, cx) in &x.terms {
            for (n, cy) in &y.terms {
                let p = self.product_classes(*m, *n, twisted)?;
                out.add_scaled(&p, &(cx * cy));
            }
        }
        Ok(out)
    }

    /// Green's coproduct on the twisted Hall algebra:
    /// the `(M, N)` coefficient is `v^{<M,N>} h^R_{MN} a_R/(a_M a_N)`,
    /// which simplifies to `v^{<M,N>} F^R_{MN}`.
    pub fn coproduct_class(&self, r: IsoClass) -> Result<TensorElement> {
        let mut out = TensorElement::zero(self.q());
        for ((sub, quot), f) in self.cat.sub_quot_table(r)?.iter() {
            let (m, n) = (*quot, *sub);
            let e = self.cat.euler_form(&self.cat.class_of(m), &self.cat.class_of(n));
            out.add_term((m, n), &self.vpow(e) * &self.rational(f));
        }
        Ok(out)
    }

    pub fn coproduct(&self, x: &HallElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero(self.q());
        for (r, c) in &x.terms {
            for (key, d) in self.coproduct_class(*r)?.terms {
                out.add_term(key, &d * c);
            }
        }
        Ok(out)
    }

    /// `epsilon([M]) = delta_{M,0}`, extended linearly.
    pub fn counit(&self, x: &HallElement) -> Result<Coeff> {
        Ok(x.coeff(self.cat.zero_object()?))
    }

    /// Twisted multiplication on the tensor square:
    /// `(a (x) b) * (c (x) d) = v^{(b,c)} (a*c) (x) (b*d)`.
    pub fn tensor_product(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero(self.q());
        for ((a, b), cx) in &x.terms {
            for ((c, d), cy) in &y.terms {
                let twist = self.vpow(
                    self.cat.sym_form(&self.cat.class_of(*b), &self.cat.class_of(*c)),
                );
                let left = self.product_classes(*a, *c, true)?;
                let right = self.product_classes(*b, *d, true)?;
                let scale = &(cx * cy) * &twist;
                for (la, ca) in &left.terms {
                    for (rb, cb) in &right.terms {
                        out.add_term((*la, *rb), &(&scale * ca) * cb);
                    }
                }
            }
        }
        Ok(out)
    }

    // ----- verification suites -------------------------------------------

    /// In the one-vertex discrete case, the brute-force subobject counts
    /// match the closed-form Gaussian binomials.
    pub fn verify_gaussian_counts(q: u32, max_total: i64) -> Result<SuiteOutcome> {
        let mut suite = SuiteOutcome::new("gaussian-binomial");
        let cat = Category::vect_generic(q)?;
        for total in 0..=max_total {
            let r = cat.objects_of_class(&K0Class(vec![total]))?[0];
            for sub in 0..=total {
                let s = cat.objects_of_class(&K0Class(vec![sub]))?[0];
                let m = cat.objects_of_class(&K0Class(vec![total - sub]))?[0];
                let counted = cat.sub_quotient_count(r, m, s)?;
                let closed = crate::finfield::gaussian_binomial(total as usize, sub as usize, q);
                suite.check(counted == closed, || {
                    format!(
                        "subspaces of dim {sub} in dim {total} over F_{q}: \
                         counted {counted}, closed form {closed}"
                    )
                });
            }
        }
        Ok(suite)
    }

    /// Both Hall-number routes agree on every matching triple within bound.
    pub fn verify_hall_numbers(&self, bound: &K0Class) -> Result<SuiteOutcome> {
        let mut suite = SuiteOutcome::new("hall-number-double-entry");
        let objs = self.cat.objects_up_to(bound)?;
        for &m in &objs {
            for &n in &objs {
                let target = &self.cat.class_of(m) + &self.cat.class_of(n);
                for r in self.cat.objects_of_class(&target)? {
                    let via_counts = self.hall_number(m, n, r)?;
                    let direct = match self.hall_number_direct(m, n, r) {
                        Ok(c) => c,
                        Err(Error::Budget(msg)) => {
                            suite.abort(msg);
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    suite.check(via_counts == direct, || {
                        format!(
                            "h^{}_{{{},{}}}: filtration route {} vs cocycle route {}",
                            self.cat.name_of(r),
                            self.cat.name_of(m),
                            self.cat.name_of(n),
                            via_counts,
                            direct
                        )
                    });
                }
            }
        }
        Ok(suite)
    }

    /// Exhaustive associativity of the twisted product within bound.
    pub fn verify_associativity(&self, bound: &K0Class) -> Result<SuiteOutcome> {
        let mut suite = SuiteOutcome::new("hall-associativity");
        let objs = self.cat.objects_up_to(bound)?;
        for &m in &objs {
            for &n in &objs {
                let mn = self.product_classes(m, n, true)?;
                for &l in &objs {
                    let left = self.product(&mn, &HallElement::basis(self.q(), l), true)?;
                    let nl = self.product_classes(n, l, true)?;
                    let right =
                        self.product(&HallElement::basis(self.q(), m), &nl, true)?;
                    suite.check(left == right, || {
                        format!(
                            "([{}][{}])[{}] != [{}]([{}][{}])",
                            self.cat.name_of(m),
                            self.cat.name_of(n),
                            self.cat.name_of(l),
                            self.cat.name_of(m),
                            self.cat.name_of(n),
                            self.cat.name_of(l)
                        )
                    });
                }
            }
        }
        Ok(suite)
    }

    /// Green's formula for one 4-tuple with matching `K_0` classes.
    fn green_formula_holds(
        &self,
        m: IsoClass,
        n: IsoClass,
        k1: IsoClass,
        k2: IsoClass,
    ) -> Result<bool> {
        let q = self.q();
        let total = &self.cat.class_of(m) + &self.cat.class_of(n);
        let mut lhs = Coeff::zero(q);
        for k in self.cat.objects_of_class(&total)? {
            let h1 = self.hall_number(m, n, k)?;
            if h1.is_zero() {
                continue;
            }
            let h2 = self.hall_number(k1, k2, k)?;
            if h2.is_zero() {
                continue;
            }
            lhs = &lhs + &(&(&self.aut_coeff(k) * &h1) * &h2);
        }
        let mut rhs = Coeff::zero(q);
        // (sub, quot) entries: sub = M2 (with quotient M1) etc.
        let m_table = self.cat.sub_quot_table(m)?;
        let n_table = self.cat.sub_quot_table(n)?;
        let scale_all = &(&self.aut_coeff(m) * &self.aut_coeff(n))
            * &(&self.aut_coeff(k1) * &self.aut_coeff(k2));
        for ((m2, m1), _) in m_table.iter() {
            for ((n2, n1), _) in n_table.iter() {
                let c_m1n1 = &self.cat.class_of(*m1) + &self.cat.class_of(*n1);
                if c_m1n1 != self.cat.class_of(k1) {
                    continue;
                }
                let hm = self.hall_number(*m1, *m2, m)?;
                let hn = self.hall_number(*n1, *n2, n)?;
                let hk1 = self.hall_number(*m1, *n1, k1)?;
                let hk2 = self.hall_number(*m2, *n2, k2)?;
                let prod = &(&hm * &hn) * &(&hk1 * &hk2);
                if prod.is_zero() {
                    continue;
                }
                let twist = self.vpow(
                    -2 * self
                        .cat
                        .euler_form(&self.cat.class_of(*m1), &self.cat.class_of(*n2)),
                );
                let denom = &(&self.aut_coeff(*m1) * &self.aut_coeff(*m2))
                    * &(&self.aut_coeff(*n1) * &self.aut_coeff(*n2));
                let term = &(&twist * &scale_all.try_div(&denom)?) * &prod;
                rhs = &rhs + &term;
            }
        }
        Ok(lhs == rhs)
    }

    /// Green's formula exhaustively over all 4-tuples within bound.
    pub fn verify_green_formula(&self, bound: &K0Class) -> Result<SuiteOutcome> {
        let mut suite = SuiteOutcome::new("green-formula");
        let objs = self.cat.objects_up_to(bound)?;
        for &m in &objs {
            for &n in &objs {
                let total = &self.cat.class_of(m) + &self.cat.class_of(n);
                for c1 in effective_classes_up_to(&total) {
                    let c2 = &total - &c1;
                    if !c2.is_effective() {
                        continue;
                    }
                    for k1 in self.cat.objects_of_class(&c1)? {
                        for k2 in self.cat.objects_of_class(&c2)? {
                            let ok = self.green_formula_holds(m, n, k1, k2)?;
                            suite.check(ok, || {
                                format!(
                                    "green formula fails at (M,N,K1,K2)=({},{},{},{})",
                                    self.cat.name_of(m),
                                    self.cat.name_of(n),
                                    self.cat.name_of(k1),
                                    self.cat.name_of(k2)
                                )
                            });
                        }
                    }
                }
            }
        }
        Ok(suite)
    }

    /// The five-object consequence of Green's formula and associativity.
    fn green_corollary_holds(
        &self,
        m: IsoClass,
        n: IsoClass,
        k1: IsoClass,
        c: IsoClass,
        k2: IsoClass,
    ) -> Result<bool> {
        let q = self.q();
        let total = &self.cat.class_of(m) + &self.cat.class_of(n);
        let mut lhs = Coeff::zero(q);
        for k in self.cat.objects_of_class(&total)? {
            let h1 = self.hall_number(m, n, k)?;
            if h1.is_zero() {
                continue;
            }
            let h2 = self.iterated_hall_number(&[k1, c, k2], k)?;
            lhs = &lhs + &(&(&self.aut_coeff(k) * &h1) * &h2);
        }
        let mut rhs = Coeff::zero(q);
        let scale_all = &(&(&self.aut_coeff(m) * &self.aut_coeff(n)) * &self.aut_coeff(c))
            * &(&self.aut_coeff(k1) * &self.aut_coeff(k2));
        let objs_m = effective_classes_up_to(&self.cat.class_of(m));
        // Enumerate (M1, C1, M2) splits of M and (N1, C2, N2) splits of N
        // constrained by the K_0 classes of K1, C, K2.
        for cm1 in &objs_m {
            for cc1 in effective_classes_up_to(&(&self.cat.class_of(m) - cm1)) {
                let cm2 = &(&self.cat.class_of(m) - cm1) - &cc1;
                let cn1 = &self.cat.class_of(k1) - cm1;
                let cc2 = &self.cat.class_of(c) - &cc1;
                let cn2 = &self.cat.class_of(k2) - &cm2;
                if !cn1.is_effective() || !cc2.is_effective() || !cn2.is_effective() {
                    continue;
                }
                if &(&cn1 + &cc2) + &cn2 != self.cat.class_of(n) {
                    continue;
                }
                for m1 in self.cat.objects_of_class(cm1)? {
                    for c1 in self.cat.objects_of_class(&cc1)? {
                        for m2 in self.cat.objects_of_class(&cm2)? {
                            let hm = self.iterated_hall_number(&[m1, c1, m2], m)?;
                            if hm.is_zero() {
                                continue;
                            }
                            for n1 in self.cat.objects_of_class(&cn1)? {
                                let hk1 = self.hall_number(m1, n1, k1)?;
                                if hk1.is_zero() {
                                    continue;
                                }
                                for c2 in self.cat.objects_of_class(&cc2)? {
                                    let hc = self.hall_number(c1, c2, c)?;
                                    if hc.is_zero() {
                                        continue;
                                    }
                                    for n2 in self.cat.objects_of_class(&cn2)? {
                                        let hn =
                                            self.iterated_hall_number(&[n1, c2, n2], n)?;
                                        let hk2 = self.hall_number(m2, n2, k2)?;
                                        let prod = &(&hm * &hn) * &(&(&hk1 * &hc) * &hk2);
                                        if prod.is_zero() {
                                            continue;
                                        }
                                        let e = -2 * self.cat.euler_form(
                                            cm1,
                                            &(&cc2 + &cn2),
                                        ) - 2 * self.cat.euler_form(&cc1, &cn2);
                                        let denom = &(&(&self.aut_coeff(m1)
                                            * &self.aut_coeff(n1))
                                            * &(&self.aut_coeff(c1) * &self.aut_coeff(m2)))
                                            * &(&self.aut_coeff(c2) * &self.aut_coeff(n2));
                                        let term = &(&self.vpow(e)
                                            * &scale_all.try_div(&denom)?)
                                            * &prod;
                                        rhs = &rhs + &term;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(lhs == rhs)
    }

    /// The corollary exhaustively over all 5-tuples within bound.
    pub fn verify_green_corollary(&self, bound: &K0Class) -> Result<SuiteOutcome> {
        let mut suite = SuiteOutcome::new("green-corollary");
        let objs = self.cat.objects_up_to(bound)?;
        for &m in &objs {
            for &n in &objs {
                let total = &self.cat.class_of(m) + &self.cat.class_of(n);
                for c1 in effective_classes_up_to(&total) {
                    for cc in effective_classes_up_to(&(&total - &c1)) {
                        let c2 = &(&total - &c1) - &cc;
                        for k1 in self.cat.objects_of_class(&c1)? {
                            for c in self.cat.objects_of_class(&cc)? {
                                for k2 in self.cat.objects_of_class(&c2)? {
                                    let ok = self.green_corollary_holds(m, n, k1, c, k2)?;
                                    suite.check(ok, || {
                                        format!(
                                            "green corollary fails at ({},{},{},{},{})",
                                            self.cat.name_of(m),
                                            self.cat.name_of(n),
                                            self.cat.name_of(k1),
                                            self.cat.name_of(c),
                                            self.cat.name_of(k2)
                                        )
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(suite)
    }

    /// Coassociativity of Green's coproduct within bound.
    pub fn verify_coassociativity(&self, bound: &K0Class) -> Result<SuiteOutcome> {
        let mut suite = SuiteOutcome::new("hall-coassociativity");
        for &r in &self.cat.objects_up_to(bound)? {
            let delta = self.coproduct_class(r)?;
            let mut left: BTreeMap<(IsoClass, IsoClass, IsoClass), Coeff> = BTreeMap::new();
            let mut right = left.clone();
            for ((a, b), c) in &delta.terms {
                for ((a1, a2), d) in self.coproduct_class(*a)?.terms {
                    let key = (a1, a2, *b);
                    let v = left.entry(key).or_insert_with(|| Coeff::zero(self.q()));
                    *v = &*v + &(&d * c);
                }
                for ((b1, b2), d) in self.coproduct_class(*b)?.terms {
                    let key = (*a, b1, b2);
                    let v = right.entry(key).or_insert_with(|| Coeff::zero(self.q()));
                    *v = &*v + &(&d * c);
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            suite.check(left == right, || {
                format!("coassociativity fails at [{}]", self.cat.name_of(r))
            });
        }
        Ok(suite)
    }

    /// Compatibility: `Delta([M]*[N]) = Delta([M]) * Delta([N])` with the
    /// `v^{(b,c)}`-twisted tensor-square multiplication.
    pub fn verify_bialgebra(&self, bound: &K0Class) -> Result<SuiteOutcome> {
        let mut suite = SuiteOutcome::new("hall-bialgebra-compatibility");
        let objs = self.cat.objects_up_to(bound)?;
        for &m in &objs {
            for &n in &objs {
                let prod = self.product_classes(m, n, true)?;
                let lhs = self.coproduct(&prod)?;
                let rhs =
                    self.tensor_product(&self.coproduct_class(m)?, &self.coproduct_class(n)?)?;
                suite.check(lhs == rhs, || {
                    format!(
                        "bialgebra compatibility fails at ([{}],[{}])",
                        self.cat.name_of(m),
                        self.cat.name_of(n)
                    )
                });
            }
        }
        Ok(suite)
    }

    /// `(eps (x) id) Delta = id = (id (x) eps) Delta` on basis classes.
    pub fn verify_counit(&self, bound: &K0Class) -> Result<SuiteOutcome> {
        let mut suite = SuiteOutcome::new("hall-counit");
        let zero = self.cat.zero_object()?;
        for &r in &self.cat.objects_up_to(bound)? {
            let delta = self.coproduct_class(r)?;
            let mut left = HallElement::zero(self.q());
            let mut right = HallElement::zero(self.q());
            for ((a, b), c) in &delta.terms {
                if *a == zero {
                    left.add_term(*b, c.clone());
                }
                if *b == zero {
                    right.add_term(*a, c.clone());
                }
            }
            let expect = HallElement::basis(self.q(), r);
            suite.check(left == expect && right == expect, || {
                format!("counit axiom fails at [{}]", self.cat.name_of(r))
            });
        }
        Ok(suite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::QuiverSpec;

    fn vect2() -> HallAlgebra {
        HallAlgebra::new(Category::vect(2).unwrap())
    }

    fn a2() -> HallAlgebra {
        HallAlgebra::new(Category::quiver(QuiverSpec::a2(), 2).unwrap())
    }

    #[test]
    fn hall_numbers_on_vect() {
        let h = vect2();
        let objs = h.cat.objects_up_to(&K0Class(vec![2])).unwrap();
        let (v0, v1, v2) = (objs[0], objs[1], objs[2]);
        // h^{V2}_{V1 V1} = F * a a / a = 3 * 1 * 1 / 6 = 1/2.
        let half = Coeff::from_parts(
            2,
            num::rational::BigRational::new(1.into(), 2.into()),
            num::traits::Zero::zero(),
        );
        assert_eq!(h.hall_number(v1, v1, v2).unwrap(), half);
        assert_eq!(h.hall_number_direct(v1, v1, v2).unwrap(), half);
        assert_eq!(h.hall_number(v2, v0, v2).unwrap(), Coeff::one(2));
        // Twisted product picks up v^{<1,1>} = v.
        let prod = h.product_classes(v1, v1, true).unwrap();
        assert_eq!(prod.coeff(v2), &Coeff::v_pow(2, 1) * &half);
    }

    #[test]
    fn hall_numbers_on_a2() {
        let h = a2();
        let s1 = h.cat.objects_of_class(&K0Class(vec![1, 0])).unwrap()[0];
        let s2 = h.cat.objects_of_class(&K0Class(vec![0, 1])).unwrap()[0];
        let objs11 = h.cat.objects_of_class(&K0Class(vec![1, 1])).unwrap();
        for r in objs11 {
            let via = h.hall_number(s1, s2, r).unwrap();
            let direct = h.hall_number_direct(s1, s2, r).unwrap();
            assert_eq!(via, direct);
            // Both middle terms occur with Hall number 1 at q=2.
            assert_eq!(via, Coeff::one(2));
            // Opposite order: only the split middle, with h = 1/|Hom(S2,S1)|.
            let rev = h.hall_number(s2, s1, r).unwrap();
            let split = h.cat.direct_sum_class(s1, s2).unwrap();
            assert_eq!(rev, if r == split { Coeff::one(2) } else { Coeff::zero(2) });
        }
    }

    #[test]
    fn green_coproduct_on_v2() {
        let h = vect2();
        let objs = h.cat.objects_up_to(&K0Class(vec![2])).unwrap();
        let (v0, v1, v2) = (objs[0], objs[1], objs[2]);
        let d = h.coproduct_class(v2).unwrap();
        assert_eq!(d.terms[&(v2, v0)], Coeff::one(2));
        assert_eq!(d.terms[&(v0, v2)], Coeff::one(2));
        // Coefficient v^{<1,1>} F^{V2}_{V1V1} = 3 v.
        assert_eq!(
            d.terms[&(v1, v1)],
            &Coeff::from_int(2, 3) * &Coeff::v_pow(2, 1)
        );
    }

    #[test]
    fn small_suites_pass() {
        let h = vect2();
        let b = K0Class(vec![2]);
        assert!(h.verify_hall_numbers(&b).unwrap().passed());
        assert!(h.verify_associativity(&b).unwrap().passed());
        assert!(h.verify_coassociativity(&b).unwrap().passed());
        assert!(h.verify_bialgebra(&b).unwrap().passed());
        assert!(h.verify_counit(&b).unwrap().passed());
        let ha = a2();
        let ba = K0Class(vec![1, 1]);
        assert!(ha.verify_hall_numbers(&ba).unwrap().passed());
        assert!(ha.verify_associativity(&ba).unwrap().passed());
        assert!(ha.verify_bialgebra(&ba).unwrap().passed());
    }

    #[test]
    fn green_formula_small() {
        let h = vect2();
        assert!(h.verify_green_formula(&K0Class(vec![1])).unwrap().passed());
        let ha = a2();
        assert!(ha.verify_green_formula(&K0Class(vec![1, 0])).unwrap().passed());
    }
}
