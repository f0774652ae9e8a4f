//! JSON encodings of library results. Field elements are integers over a
//! prime field and coefficient arrays `[c₀, c₁, …]` otherwise; matrices are
//! row-major arrays of those.

use galimage_core::bounds::{
    AdmissibilityVerdict, Comparison, EndoType, ExactExpr, FailedCondition, IndeterminateReason, VarietyDescriptor,
};
use galimage_core::classify::{ClassReport, Conclusion, ElementLabel, Evidence, Verdict, Witness};
use galimage_core::dickson::{DicksonReport, DicksonWitness};
use galimage_core::field::{FqElem, FqField};
use galimage_core::inertia::{Character, CubicWitness, InertiaPattern};
use galimage_core::matrix::Mat;
use galimage_core::products::{PairStatus, ProductReport, ProductVerdict, SeparatingElement, TwistedGraph};
use galimage_core::symplectic::Subspace;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

pub fn elem(f: &FqField, x: FqElem) -> Value {
    if f.degree() == 1 {
        json!(x.0[0])
    } else {
        json!(f.coeffs(x))
    }
}

pub fn mat<const N: usize>(f: &FqField, m: &Mat<N>) -> Value {
    Value::Array(m.0.iter().map(|r| Value::Array(r.iter().map(|&x| elem(f, x)).collect())).collect())
}

pub fn field(f: &FqField) -> Value {
    json!({"l": f.characteristic(), "degree": f.degree(), "modulus": f.modulus()})
}

fn subspace(f: &FqField, s: &Subspace) -> Value {
    Value::Array(s.basis.iter().map(|v| Value::Array(v.iter().map(|&x| elem(f, x)).collect())).collect())
}

pub fn rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Infix rendering of an expression tree.
pub fn expr(e: &ExactExpr) -> String {
    match e {
        ExactExpr::RationalConst(r) if r.denom().is_one() => rational(r),
        ExactExpr::RationalConst(r) => format!("({})", rational(r)),
        ExactExpr::NaturalLog(r) => format!("ln({})", rational(r)),
        ExactExpr::Max(cs) => format!("max({})", cs.iter().map(expr).collect::<Vec<_>>().join(", ")),
        ExactExpr::Product(cs) => format!("({})", cs.iter().map(expr).collect::<Vec<_>>().join(" * ")),
        ExactExpr::Power(b, x) if matches!(**b, ExactExpr::Power(..)) => {
            format!("({})^{{{}}}", expr(b), rational(x))
        }
        ExactExpr::Power(b, x) => format!("{}^{{{}}}", expr(b), rational(x)),
    }
}

/// The threshold in terms of `b(d, g, h)`.
pub fn threshold_symbol(desc: &VarietyDescriptor) -> String {
    let d = desc.degree_k;
    let g = desc.dim;
    let h = rational(&desc.faltings_height);
    let h2 = rational(&(&desc.faltings_height * BigRational::from_integer(BigInt::from(2))));
    match desc.endo_type {
        EndoType::TrivialEndo => format!("b({},4,{h2})^{{1/4}}", 2 * d),
        EndoType::Gl2Type { .. } => {
            format!("max(b({d},{g},{h})^{{{g}}}, b({},{},{h2})^{{1/2}})", 2 * d, 2 * g)
        }
        EndoType::RealMultSurface { .. } | EndoType::QuaternionMult { .. } => {
            format!("b({},4,{h2})^{{1/2}}", 2 * d)
        }
    }
}

pub fn descriptor(desc: &VarietyDescriptor) -> Value {
    let endo = match &desc.endo_type {
        EndoType::TrivialEndo => json!({"kind": "TrivialEndo"}),
        EndoType::Gl2Type { field_degree, disc_e } => {
            json!({"kind": "GL2Type", "field_degree": field_degree, "disc_E": disc_e.to_string()})
        }
        EndoType::RealMultSurface { disc_e } => json!({"kind": "RealMultSurface", "disc_E": disc_e.to_string()}),
        EndoType::QuaternionMult { delta } => json!({"kind": "QuaternionMult", "delta": delta.to_string()}),
    };
    let primes = |v: &[u64]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    json!({
        "degree_K": desc.degree_k,
        "faltings_height": rational(&desc.faltings_height),
        "dim": desc.dim,
        "endo_type": endo,
        "ramified_primes_K": primes(&desc.ramified_primes_k),
        "non_semistable_primes": primes(&desc.non_semistable_primes),
        "endos_over_K": desc.endos_over_k,
    })
}

/// `[lower, upper]` bounds on the bit length, as decimal strings.
pub fn bit_length(e: &ExactExpr, prec: u32) -> Value {
    let (lo, hi) = e.bit_length_bounds(prec);
    json!({"lower": lo.to_string(), "upper": hi.to_string()})
}

/// Hypotheses a prime must satisfy beyond exceeding the threshold.
pub fn side_conditions(desc: &VarietyDescriptor) -> Vec<Value> {
    let primes = |v: &[u64]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let mut out = vec![json!({
        "code": "unramified_in_K",
        "text": "ℓ is unramified in K",
        "excluded_primes": primes(&desc.ramified_primes_k),
    })];
    match &desc.endo_type {
        EndoType::TrivialEndo => out.push(json!({
            "code": "semistable_place",
            "text": "A has semistable reduction at some place of K above ℓ",
            "excluded_primes": primes(&desc.non_semistable_primes),
        })),
        EndoType::Gl2Type { disc_e, .. } | EndoType::RealMultSurface { disc_e } => {
            out.push(json!({
                "code": "unramified_in_E",
                "text": format!("ℓ is unramified in E (ℓ ∤ disc_E = {disc_e})"),
            }));
            out.push(json!({"code": "endos_over_K", "text": "all endomorphisms of A are defined over K"}));
        }
        EndoType::QuaternionMult { delta } => {
            out.push(json!({"code": "coprime_to_delta", "text": format!("ℓ ∤ {delta}")}));
            out.push(json!({"code": "endos_over_K", "text": "all endomorphisms of A are defined over K"}));
        }
    }
    out
}

pub fn comparison(c: &Comparison) -> Value {
    match c {
        Comparison::PrimeAbove => json!("PrimeAbove"),
        Comparison::PrimeBelow => json!("PrimeBelow"),
        Comparison::Indeterminate(IndeterminateReason::Equal) => json!("Indeterminate(Equal)"),
        Comparison::Indeterminate(IndeterminateReason::PrecisionCap) => json!("Indeterminate(PrecisionCap)"),
    }
}

fn failed(c: &FailedCondition) -> Value {
    match c {
        FailedCondition::BelowThreshold { indeterminate } => {
            json!({"code": c.as_str(), "indeterminate": indeterminate})
        }
        _ => json!({"code": c.as_str()}),
    }
}

pub fn admissibility(v: &AdmissibilityVerdict, prec: u32) -> Value {
    json!({
        "prime": v.prime.to_string(),
        "admissible": v.admissible,
        "threshold": {"expression": expr(&v.threshold), "bit_length": bit_length(&v.threshold, prec)},
        "comparison": comparison(&v.comparison),
        "failed_conditions": v.failed_conditions.iter().map(failed).collect::<Vec<_>>(),
        "expected_image": v.expected_image,
    })
}

fn label(l: &ElementLabel) -> Value {
    match l {
        ElementLabel::Generator(i) => json!({"generator": i}),
        ElementLabel::Word(i) => json!({"word": i}),
    }
}

fn signs(s: &[i8]) -> Value {
    json!(s)
}

fn witness(f: &FqField, w: &Witness) -> Value {
    match w {
        Witness::InvariantSubspace(s) => json!({"kind": "InvariantSubspace", "basis": subspace(f, s)}),
        Witness::Decomposition { v1, v2, involution, signs: sg } => json!({
            "kind": "Decomposition",
            "v1": subspace(f, v1),
            "v2": subspace(f, v2),
            "involution": mat(f, involution),
            "signs": signs(sg),
        }),
        Witness::FieldStructure { x, square, signs: sg } => json!({
            "kind": "FieldStructure",
            "x": mat(f, x),
            "square": elem(f, *square),
            "signs": signs(sg),
        }),
        Witness::Type4Shape { samples, words, seed } => json!({
            "kind": "Type4Shape",
            "statistical": true,
            "words": words,
            "seed": seed,
            "samples": samples
                .iter()
                .map(|(l, t, n)| json!({"element": label(l), "t": elem(f, *t), "n": elem(f, *n)}))
                .collect::<Vec<_>>(),
        }),
        Witness::ProjectiveOrder(n) => json!({"kind": "ProjectiveOrder", "order": n}),
    }
}

fn evidence(f: &FqField, e: &Evidence) -> Value {
    match e {
        Evidence::Note(s) => json!({"kind": "Note", "text": s}),
        Evidence::Type4Failure { label: l, element } => {
            json!({"kind": "Type4Failure", "element": label(l), "matrix": mat(f, element)})
        }
        Evidence::ProjectiveOrderExceeds(n) => json!({"kind": "ProjectiveOrderExceeds", "cap": n}),
    }
}

pub fn class_report(f: &FqField, r: &ClassReport) -> Value {
    let verdicts: Vec<Value> = r
        .verdicts
        .iter()
        .map(|(c, v)| match v {
            Verdict::Member(w) => json!({"class": c.as_str(), "verdict": "Member", "witness": witness(f, w)}),
            Verdict::NotMember(e) => json!({"class": c.as_str(), "verdict": "NotMember", "evidence": evidence(f, e)}),
            Verdict::Unknown(s) => json!({"class": c.as_str(), "verdict": "Unknown", "reason": s}),
        })
        .collect();
    let conclusion = match &r.conclusion {
        Conclusion::ContainsSp4 => json!({
            "kind": "ContainsSp4",
            "reasoning": "no listed class contains the group, and every subgroup of GSp4(F_l) \
                          not containing Sp4(F_l) lies in a maximal subgroup from one of them",
        }),
        Conclusion::ProperWithClass(cs) => {
            json!({"kind": "ProperWithClass", "classes": cs.iter().map(|c| c.as_str()).collect::<Vec<_>>()})
        }
        Conclusion::Inconclusive => json!({"kind": "Inconclusive"}),
    };
    json!({
        "l": r.l,
        "verdicts": verdicts,
        "conclusion": conclusion,
        "type4_statistical": r.type4_statistical,
    })
}

pub fn dickson_report(f: &FqField, r: &DicksonReport) -> Value {
    let w = match &r.witness {
        DicksonWitness::Generator { element, order } => {
            json!({"kind": "Generator", "element": mat(f, element), "order": order})
        }
        DicksonWitness::FixedLine(s) => json!({"kind": "FixedLine", "basis": subspace(f, s)}),
        DicksonWitness::PermutedPair { x, split, signs: sg, index2_order, index2_cyclic } => json!({
            "kind": "PermutedPair",
            "x": mat(f, x),
            "split": split,
            "signs": signs(sg),
            "index2_order": index2_order,
            "index2_cyclic": index2_cyclic,
        }),
        DicksonWitness::Level { alpha, order, det_one_order, sl2_order, scalars } => json!({
            "kind": "Level",
            "alpha": alpha,
            "order": order,
            "det_one_order": det_one_order,
            "sl2_order": sl2_order,
            "scalars": scalars,
        }),
        DicksonWitness::ProjectiveOrder(n) => json!({"kind": "ProjectiveOrder", "order": n}),
        DicksonWitness::Partial(s) => json!({"kind": "Partial", "text": s}),
    };
    json!({"class": r.class.name(), "level": r.class.level(), "witness": w})
}

fn separating(f: &FqField, e: &SeparatingElement) -> Value {
    json!({"x": mat(f, &e.x), "y": mat(f, &e.y), "m": e.m, "samples": e.samples})
}

fn graph(f: &FqField, t: &TwistedGraph) -> Value {
    json!({
        "f": mat(f, &t.f),
        "frobenius": t.frobenius,
        "chi": t.chi.iter().map(|&c| elem(f, c)).collect::<Vec<_>>(),
    })
}

pub fn product_report(fields: &[FqField], r: &ProductReport) -> Value {
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|&((i, j), ref s)| {
            let f = &fields[i - 1];
            let status = match s {
                PairStatus::DistinctFields => json!({"kind": "DistinctFields"}),
                PairStatus::Surjective(e) => json!({"kind": "Surjective", "separating_element": separating(f, e)}),
                PairStatus::Graph(t) => json!({"kind": "Graph", "graph": graph(f, t)}),
                PairStatus::Undetermined(s) => json!({"kind": "Undetermined", "reason": s}),
            };
            json!({"pair": [i, j], "status": status})
        })
        .collect();
    let verdict = match &r.verdict {
        ProductVerdict::FullProduct => json!({"kind": "FullProduct"}),
        ProductVerdict::Proper { pair, graph: t } => {
            json!({"kind": "Proper", "pair": [pair.0, pair.1], "graph": graph(&fields[pair.0 - 1], t)})
        }
        ProductVerdict::Inconclusive { pair, reason } => {
            json!({"kind": "Inconclusive", "pair": [pair.0, pair.1], "reason": reason})
        }
    };
    json!({"verdict": verdict, "pairs": pairs})
}

pub fn character(c: &Character) -> String {
    match c {
        Character::Trivial => "1".into(),
        Character::Cyclotomic => "chi".into(),
        Character::FundamentalLevel2(i) => format!("phi{i}"),
        Character::FundamentalLevelN(e) => {
            format!("psi[{}]", e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

pub fn pattern(p: &InertiaPattern) -> Value {
    Value::Array(p.entries.iter().map(|c| json!(character(c))).collect())
}

pub fn cubic_witness(f: &FqField, w: &CubicWitness) -> Value {
    json!({
        "pattern": pattern(&w.pattern),
        "generator": elem(f, w.generator),
        "eigenvalues": w.eigenvalues.iter().map(|&x| elem(f, x)).collect::<Vec<_>>(),
        "failing_orderings": format!("{}/24", w.failing_orderings),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use galimage_core::bounds::{bound_b, int, rat};

    #[test]
    fn expression_rendering() {
        let e = ExactExpr::power(bound_b(1, 1, &int(1)), rat(1, 4));
        assert_eq!(expr(&e), "((14^{64} * 1 * max(1, ln(1), 1)^{2})^{1024})^{1/4}");
        assert_eq!(rational(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn matrices_over_extension_fields() {
        let f = FqField::new(5, 2).unwrap();
        let x = f.from_coeffs(&[1, 3]).unwrap();
        let m = Mat::<2>::diag([x, FqElem::ONE]);
        assert_eq!(mat(&f, &m), json!([[[1, 3], [0, 0]], [[0, 0], [1, 0]]]));
        let p = FqField::prime_field(7).unwrap();
        assert_eq!(mat(&p, &Mat::<2>::from_ints(&p, [[1, -1], [0, 1]])), json!([[1, 6], [0, 1]]));
    }
}
