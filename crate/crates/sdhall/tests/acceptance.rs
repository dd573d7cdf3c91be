//! End-to-end acceptance gate: one check per criterion, each printing a
//! pass/fail line.  All comparisons are exact; any failure aborts the run
//! with the offending suite's diagnostics.

use std::sync::Arc;

use sdhall::backend::Category;
use sdhall::complexes::ComplexAlgebra;
use sdhall::double::DoubleAlgebra;
use sdhall::hallcore::HallAlgebra;
use sdhall::k0::K0Class;
use sdhall::quiver::QuiverSpec;
use sdhall::report::SuiteOutcome;
use sdhall::sdh::SdhAlgebra;

fn a2(q: u32) -> Arc<Category> {
    let spec = QuiverSpec { vertices: 2, arrows: vec![(0, 1)] };
    Category::quiver(spec, q).expect("A2 backend")
}

fn gate(criterion: &str, outcomes: &[SuiteOutcome]) {
    let ok = outcomes.iter().all(|o| o.passed());
    println!("{}: {criterion}", if ok { "pass" } else { "FAIL" });
    for o in outcomes {
        assert!(
            o.passed(),
            "criterion {criterion:?}, suite {}: {:?} (aborted {})",
            o.name,
            o.failures,
            o.aborted
        );
    }
}

#[test]
fn acceptance() {
    let d4 = K0Class(vec![4]);
    let d2 = K0Class(vec![2]);
    let d1 = K0Class(vec![1]);
    let b22 = K0Class(vec![2, 2]);
    let b11 = K0Class(vec![1, 1]);

    let vect2 = Category::vect(2).expect("vect q=2");
    let vect3 = Category::vect(3).expect("vect q=3");
    let quiv2 = a2(2);

    // 1. Hall numbers: filtration-counting route against the direct
    //    subobject-counting route, on every composable triple.
    gate(
        "hall-number double-entry",
        &[
            HallAlgebra::new(vect2.clone()).verify_hall_numbers(&d4).unwrap(),
            HallAlgebra::new(vect3.clone()).verify_hall_numbers(&d4).unwrap(),
            HallAlgebra::new(quiv2.clone()).verify_hall_numbers(&b22).unwrap(),
        ],
    );

    // 2. Subspace counts against the closed-form Gaussian binomial.
    gate(
        "gaussian-binomial oracle",
        &[
            HallAlgebra::verify_gaussian_counts(2, 4).unwrap(),
            HallAlgebra::verify_gaussian_counts(3, 4).unwrap(),
        ],
    );

    // 3. Associativity of the twisted Hall product on both backends.
    gate(
        "hall product associativity",
        &[
            HallAlgebra::new(vect2.clone()).verify_associativity(&d4).unwrap(),
            HallAlgebra::new(vect3).verify_associativity(&d4).unwrap(),
            HallAlgebra::new(quiv2.clone()).verify_associativity(&b22).unwrap(),
        ],
    );

    // 4. Green's formula and its corollary, exhaustive on small tuples.
    gate(
        "green formula and corollary",
        &[
            HallAlgebra::new(vect2.clone()).verify_green_formula(&d2).unwrap(),
            HallAlgebra::new(vect2.clone()).verify_green_corollary(&d2).unwrap(),
            HallAlgebra::new(quiv2.clone()).verify_green_formula(&b11).unwrap(),
            HallAlgebra::new(quiv2.clone()).verify_green_corollary(&b11).unwrap(),
        ],
    );

    let sdh_v = SdhAlgebra::new(vect2.clone());
    let cpx_v = ComplexAlgebra::new(vect2.clone());
    let sdh_q = SdhAlgebra::new(quiv2.clone());
    let cpx_q = ComplexAlgebra::new(quiv2.clone());

    // 5. The torus generators are independent of the chosen object
    //    decomposition, and every complex reduces to its normal form.
    gate(
        "basis well-definedness and normal forms",
        &[
            sdh_v.verify_torus_well_defined(&cpx_v, &d2).unwrap(),
            sdh_v.verify_normal_forms(&cpx_v, &d2, &d2).unwrap(),
            sdh_q.verify_torus_well_defined(&cpx_q, &b11).unwrap(),
            sdh_q.verify_normal_forms(&cpx_q, &b11, &b11).unwrap(),
        ],
    );

    // 6. The closed-form product of basis keys against the brute-force
    //    complex product reduced modulo the acyclic ideal.
    gate(
        "product formula against complex oracle",
        &[
            sdh_v.verify_product_oracle(&cpx_v, &d2, 0).unwrap(),
            sdh_q.verify_product_oracle(&cpx_q, &b11, 0).unwrap(),
        ],
    );

    // 7. Coassociativity and product/coproduct compatibility.
    gate(
        "coassociativity and compatibility",
        &[
            sdh_v.verify_coassociativity(&d2, 0).unwrap(),
            sdh_v.verify_compatibility(&d2, 0).unwrap(),
            sdh_q.verify_coassociativity(&b11, 0).unwrap(),
            sdh_q.verify_compatibility(&b11, 0).unwrap(),
        ],
    );

    // 8. Counit axioms on all basis keys within bound.
    gate(
        "counit axioms",
        &[sdh_v.verify_counit(&d2, 0).unwrap(), sdh_q.verify_counit(&b11, 0).unwrap()],
    );

    let dbl_v = DoubleAlgebra::new(vect2.clone());
    let dbl_q = DoubleAlgebra::new(quiv2.clone());

    // 9. The Hopf pairing between the two extended halves, and the
    //    bialgebra axioms of each half.
    gate(
        "hopf pairing and extended bialgebra",
        &[
            dbl_v.verify_ext_bialgebra(&d2).unwrap(),
            dbl_v.verify_hopf_pairing(&d2).unwrap(),
            dbl_q.verify_ext_bialgebra(&b11).unwrap(),
            dbl_q.verify_hopf_pairing(&b11).unwrap(),
        ],
    );

    // 10. The double relations transported through the embeddings, and
    //     the coproduct isomorphism.
    gate(
        "double relations and coproduct isomorphism",
        &[
            dbl_v.verify_double_relations(&sdh_v, &d2).unwrap(),
            dbl_v.verify_coproduct_iso(&sdh_v, &d2).unwrap(),
            dbl_q.verify_double_relations(&sdh_q, &b11).unwrap(),
            dbl_q.verify_coproduct_iso(&sdh_q, &b11).unwrap(),
        ],
    );

    // 11. Sensitivity: shifting either closed-form exponent by one in
    //     either direction must break at least one instance, so the
    //     suites above cannot pass vacuously.
    let mut broke = true;
    for tweak in [1, -1] {
        let prod = sdh_v.verify_product_oracle(&cpx_v, &d1, tweak).unwrap();
        broke &= prod.failure_count > 0;
        let coas = sdh_v.verify_coassociativity(&d2, tweak).unwrap();
        let comp = sdh_v.verify_compatibility(&d2, tweak).unwrap();
        broke &= coas.failure_count > 0 || comp.failure_count > 0;
    }
    println!("{}: exponent perturbations are detected", if broke { "pass" } else { "FAIL" });
    assert!(broke, "a perturbed exponent passed every suite");
}
