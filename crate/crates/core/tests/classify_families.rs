use galimage_core::classify::{
    classify_gsp4, verify_witness, ClassName, ClassReport, ClassifyOptions, Conclusion, Verdict,
};
use galimage_core::field::FqField;
use galimage_core::planted::{conjugate_all, random_similitude, Gsp4Family};
use galimage_core::rng_from_seed;
use galimage_core::symplectic::{standard_form, MatrixGroup};

/// Classes each family must be reported in. The twisted cubic image has
/// projective image PGL₂(F_ℓ) of order ℓ(ℓ²−1), which is below 3840 for
/// ℓ ∈ {11, 13}, so it is genuinely also a small-projective group.
fn expected(fam: Gsp4Family, l: u64) -> Vec<ClassName> {
    match fam {
        Gsp4Family::Reducible => vec![ClassName::C1],
        Gsp4Family::Imprimitive => vec![ClassName::C2],
        Gsp4Family::FieldExtension => vec![ClassName::C3],
        Gsp4Family::TwistedCubic => {
            if l * (l * l - 1) <= 3840 {
                vec![ClassName::Type4, ClassName::SmallProjective]
            } else {
                vec![ClassName::Type4]
            }
        }
        Gsp4Family::SmallProjective => vec![ClassName::SmallProjective],
        Gsp4Family::Full => vec![],
    }
}

fn check(report: &ClassReport, g: &MatrixGroup<4>, fam: Gsp4Family, l: u64) {
    assert_eq!(report.members(), expected(fam, l), "{fam:?} at l={l}: {report:?}");
    for (c, v) in &report.verdicts {
        assert!(!matches!(v, Verdict::Unknown(_)), "{c:?} unknown for {fam:?}");
        if let Verdict::Member(w) = v {
            assert!(verify_witness(g, w), "{c:?} witness for {fam:?}");
        }
    }
    let full = fam == Gsp4Family::Full;
    assert_eq!(report.conclusion == Conclusion::ContainsSp4, full);
}

#[test]
fn planted_families_get_exactly_their_class() {
    for l in [11u64, 13] {
        let f = FqField::new(l, 1).unwrap();
        for fam in Gsp4Family::ALL {
            let g = fam.group(&f).unwrap();
            let r = classify_gsp4(&g, &ClassifyOptions::default()).unwrap();
            check(&r, &g, fam, l);
        }
    }
}

#[test]
fn verdicts_survive_conjugation_by_similitudes() {
    let mut rng = rng_from_seed(99);
    for l in [11u64, 13] {
        let f = FqField::new(l, 1).unwrap();
        let j = standard_form(&f).unwrap();
        for fam in Gsp4Family::ALL {
            let gens = fam.generators(&f).unwrap();
            for _ in 0..3 {
                let c = random_similitude(&f, &mut rng).unwrap();
                let g = MatrixGroup::with_form(f.clone(), conjugate_all(&f, &gens, &c), &j).unwrap();
                let r = classify_gsp4(&g, &ClassifyOptions::default()).unwrap();
                check(&r, &g, fam, l);
            }
        }
    }
}
