//! JSON input documents. Every document is checked against its schema under
//! `schemas/` and then parsed strictly: unknown fields are rejected,
//! rationals are `"num/den"` (or `"n"`) strings and primes are decimal
//! strings.

use std::str::FromStr;

use galimage_core::bounds::{EndoType, VarietyDescriptor};
use galimage_core::field::{FqElem, FqField};
use galimage_core::matrix::{Mat, Mat2, Mat4};
use galimage_core::primes::{factorize, is_prime};
use galimage_core::symplectic::{cubic_form, standard_form, MatrixGroup};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Deserialize;

/// An ingest failure, tagged with the offending field path.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("{0}")]
    Syntax(String),
    #[error("{}", .0.join("; "))]
    Schema(Vec<String>),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Field { field: field.into(), message: message.into() }
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Syntax(e.to_string()))
}

/// The shipped input schemas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Descriptor,
    Gsp4Generators,
    Gl2Generators,
    Products,
    InertiaCampaign,
}

impl Schema {
    pub const ALL: [Schema; 5] =
        [Schema::Descriptor, Schema::Gsp4Generators, Schema::Gl2Generators, Schema::Products, Schema::InertiaCampaign];

    pub fn file_name(&self) -> &'static str {
        match self {
            Schema::Descriptor => "descriptor.schema.json",
            Schema::Gsp4Generators => "gsp4_generators.schema.json",
            Schema::Gl2Generators => "gl2_generators.schema.json",
            Schema::Products => "products.schema.json",
            Schema::InertiaCampaign => "inertia_campaign.schema.json",
        }
    }

    pub fn source(&self) -> &'static str {
        match self {
            Schema::Descriptor => include_str!("../../../schemas/descriptor.schema.json"),
            Schema::Gsp4Generators => include_str!("../../../schemas/gsp4_generators.schema.json"),
            Schema::Gl2Generators => include_str!("../../../schemas/gl2_generators.schema.json"),
            Schema::Products => include_str!("../../../schemas/products.schema.json"),
            Schema::InertiaCampaign => include_str!("../../../schemas/inertia_campaign.schema.json"),
        }
    }

    /// Schema violations as `"<json pointer>: <message>"` lines.
    pub fn violations(&self, doc: &serde_json::Value) -> Vec<String> {
        let schema: serde_json::Value = serde_json::from_str(self.source()).expect("shipped schema is JSON");
        let validator = jsonschema::validator_for(&schema).expect("shipped schema compiles");
        validator
            .iter_errors(doc)
            .map(|e| {
                let at = e.instance_path().to_string();
                format!("{}: {e}", if at.is_empty() { "/" } else { at.as_str() })
            })
            .collect()
    }
}

/// Parses `text`, validates it against `schema` and deserializes it.
pub fn from_json_checked<T: for<'de> Deserialize<'de>>(schema: Schema, text: &str) -> Result<T, InputError> {
    let doc: serde_json::Value = from_json(text)?;
    let errs = schema.violations(&doc);
    if !errs.is_empty() {
        return Err(InputError::Schema(errs));
    }
    serde_json::from_value(doc).map_err(|e| InputError::Syntax(e.to_string()))
}

pub fn parse_rational(field: &str, s: &str) -> Result<BigRational, InputError> {
    let bad = || field_err(field, format!("expected a rational \"num/den\", got {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(field_err(field, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

pub fn parse_int(field: &str, s: &str) -> Result<BigInt, InputError> {
    BigInt::from_str(s.trim()).map_err(|_| field_err(field, format!("expected a decimal integer, got {s:?}")))
}

pub fn parse_prime(field: &str, s: &str) -> Result<u64, InputError> {
    let p = u64::from_str(s.trim())
        .map_err(|_| field_err(field, format!("expected a decimal prime below 2^64, got {s:?}")))?;
    if !is_prime(p) {
        return Err(field_err(field, format!("{p} is not prime")));
    }
    Ok(p)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum EndoTypeDoc {
    TrivialEndo {},
    #[serde(rename = "GL2Type")]
    Gl2Type {
        field_degree: u32,
        #[serde(rename = "disc_E")]
        disc_e: String,
    },
    RealMultSurface {
        #[serde(rename = "disc_E")]
        disc_e: String,
    },
    QuaternionMult {
        delta: String,
    },
}

/// Arithmetic data of `A/K`. Ramified primes come from `ramified_primes_K`,
/// from the prime factors of `disc_K`, or from both.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorDoc {
    #[serde(rename = "degree_K")]
    pub degree_k: u64,
    pub faltings_height: String,
    pub dim: u32,
    pub endo_type: EndoTypeDoc,
    #[serde(rename = "ramified_primes_K", default)]
    pub ramified_primes_k: Option<Vec<String>>,
    #[serde(rename = "disc_K", default)]
    pub disc_k: Option<String>,
    pub non_semistable_primes: Vec<String>,
    #[serde(rename = "endos_over_K")]
    pub endos_over_k: bool,
}

fn prime_list(field: &str, v: &[String]) -> Result<Vec<u64>, InputError> {
    let mut out =
        v.iter().enumerate().map(|(i, s)| parse_prime(&format!("{field}[{i}]"), s)).collect::<Result<Vec<_>, _>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl DescriptorDoc {
    pub fn to_descriptor(&self) -> Result<VarietyDescriptor, InputError> {
        let faltings_height = parse_rational("faltings_height", &self.faltings_height)?;
        let endo_type = match &self.endo_type {
            EndoTypeDoc::TrivialEndo {} => EndoType::TrivialEndo,
            EndoTypeDoc::Gl2Type { field_degree, disc_e } => {
                EndoType::Gl2Type { field_degree: *field_degree, disc_e: parse_int("endo_type.disc_E", disc_e)? }
            }
            EndoTypeDoc::RealMultSurface { disc_e } => {
                EndoType::RealMultSurface { disc_e: parse_int("endo_type.disc_E", disc_e)? }
            }
            EndoTypeDoc::QuaternionMult { delta } => {
                let d = parse_int("endo_type.delta", delta)?;
                if !d.is_positive() {
                    return Err(field_err("endo_type.delta", "must be positive"));
                }
                EndoType::QuaternionMult { delta: d.magnitude().clone() }
            }
        };
        if self.ramified_primes_k.is_none() && self.disc_k.is_none() {
            return Err(field_err("ramified_primes_K", "one of ramified_primes_K or disc_K is required"));
        }
        let mut ramified = match &self.ramified_primes_k {
            Some(v) => prime_list("ramified_primes_K", v)?,
            None => Vec::new(),
        };
        if let Some(d) = &self.disc_k {
            let d = parse_int("disc_K", d)?;
            if d.is_zero() {
                return Err(field_err("disc_K", "must be nonzero"));
            }
            let m = u64::try_from(d.magnitude()).map_err(|_| field_err("disc_K", "|disc_K| must be below 2^64"))?;
            ramified.extend(factorize(m).into_iter().map(|(p, _)| p));
            ramified.sort_unstable();
            ramified.dedup();
        }
        let desc = VarietyDescriptor {
            degree_k: self.degree_k,
            faltings_height,
            dim: self.dim,
            endo_type,
            ramified_primes_k: ramified,
            non_semistable_primes: prime_list("non_semistable_primes", &self.non_semistable_primes)?,
            endos_over_k: self.endos_over_k,
        };
        desc.validate().map_err(|e| field_err("descriptor", e.to_string()))?;
        Ok(desc)
    }
}

/// A field entry: an integer for the prime field, or coefficients
/// `[c₀, c₁, …]` of `c₀ + c₁x + …` in the field's modulus basis.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EntryDoc {
    Int(i64),
    Coeffs(Vec<i64>),
}

pub type MatrixDoc = Vec<Vec<EntryDoc>>;

/// `F_{ℓⁿ}`; without `modulus` the library's deterministic choice is used.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub l: u64,
    #[serde(default = "one")]
    pub degree: usize,
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> usize {
    1
}

impl FieldDoc {
    pub fn to_field(&self, path: &str) -> Result<FqField, InputError> {
        let f = match &self.modulus {
            Some(m) => {
                if m.len() != self.degree + 1 {
                    return Err(field_err(format!("{path}modulus"), "length must be degree + 1"));
                }
                FqField::with_modulus(self.l, m.clone())
            }
            None => FqField::new(self.l, self.degree),
        };
        f.map_err(|e| field_err(format!("{path}l"), e.to_string()))
    }
}

fn entry(f: &FqField, path: &str, e: &EntryDoc) -> Result<FqElem, InputError> {
    match e {
        EntryDoc::Int(v) => Ok(f.from_int(*v)),
        EntryDoc::Coeffs(c) => {
            f.from_coeffs(c).ok_or_else(|| field_err(path, format!("at most {} coefficients allowed", f.degree())))
        }
    }
}

pub fn matrix<const N: usize>(f: &FqField, path: &str, m: &MatrixDoc) -> Result<Mat<N>, InputError> {
    if m.len() != N || m.iter().any(|r| r.len() != N) {
        return Err(field_err(path, format!("expected a {N}x{N} row-major matrix")));
    }
    let mut out = Mat::<N>::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out.0[i][j] = entry(f, &format!("{path}[{i}][{j}]"), e)?;
        }
    }
    if out.det(f).is_zero() {
        return Err(field_err(path, "matrix is singular"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Standard,
    Cubic,
}

/// Generators of a subgroup of `GSp₄(F_ℓ)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gsp4Doc {
    pub l: u64,
    pub form: FormKind,
    pub generators: Vec<MatrixDoc>,
}

impl Gsp4Doc {
    pub fn to_group(&self) -> Result<MatrixGroup<4>, InputError> {
        let f = FqField::prime_field(self.l).map_err(|e| field_err("l", e.to_string()))?;
        let form = match self.form {
            FormKind::Standard => standard_form(&f),
            FormKind::Cubic => cubic_form(&f),
        }
        .map_err(|e| field_err("form", e.to_string()))?;
        if self.generators.is_empty() {
            return Err(field_err("generators", "at least one generator is required"));
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, m)| matrix::<4>(&f, &format!("generators[{i}]"), m))
            .collect::<Result<Vec<Mat4>, _>>()?;
        for (i, g) in gens.iter().enumerate() {
            MatrixGroup::with_form(f.clone(), vec![*g], &form)
                .map_err(|e| field_err(format!("generators[{i}]"), e.to_string()))?;
        }
        MatrixGroup::with_form(f, gens, &form).map_err(|e| field_err("generators", e.to_string()))
    }
}

/// Generators of a subgroup of `GL₂(F_q)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gl2Doc {
    pub l: u64,
    #[serde(default = "one")]
    pub degree: usize,
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
    pub generators: Vec<MatrixDoc>,
}

impl Gl2Doc {
    pub fn to_group(&self) -> Result<MatrixGroup<2>, InputError> {
        let fd = FieldDoc { l: self.l, degree: self.degree, modulus: self.modulus.clone() };
        let f = fd.to_field("")?;
        if self.generators.is_empty() {
            return Err(field_err("generators", "at least one generator is required"));
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, m)| matrix::<2>(&f, &format!("generators[{i}]"), m))
            .collect::<Result<Vec<Mat2>, _>>()?;
        MatrixGroup::new(f, gens).map_err(|e| field_err("generators", e.to_string()))
    }
}

/// `H_ℓ` for the given residue degrees.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HEllDoc {
    pub l: u64,
    pub residue_degrees: Vec<usize>,
}

/// A subgroup of `∏ GL₂(F_{qᵢ})`, either by explicit generator tuples or as
/// `H_ℓ`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    #[serde(default)]
    pub factors: Option<Vec<FieldDoc>>,
    #[serde(default)]
    pub generators: Option<Vec<Vec<MatrixDoc>>>,
    #[serde(default)]
    pub h_ell: Option<HEllDoc>,
}

pub enum ProductInput {
    Explicit { fields: Vec<FqField>, generators: Vec<Vec<Mat2>> },
    HEll(HEllDoc),
}

impl ProductDoc {
    pub fn to_input(&self) -> Result<ProductInput, InputError> {
        match (&self.factors, &self.generators, &self.h_ell) {
            (None, None, Some(h)) => {
                if h.residue_degrees.len() < 2 {
                    return Err(field_err("h_ell.residue_degrees", "at least two factors are required"));
                }
                Ok(ProductInput::HEll(h.clone()))
            }
            (Some(fs), Some(gs), None) => {
                if fs.len() < 2 {
                    return Err(field_err("factors", "at least two factors are required"));
                }
                let fields = fs
                    .iter()
                    .enumerate()
                    .map(|(i, fd)| fd.to_field(&format!("factors[{i}].")))
                    .collect::<Result<Vec<_>, _>>()?;
                if gs.is_empty() {
                    return Err(field_err("generators", "at least one generator is required"));
                }
                let mut generators = Vec::with_capacity(gs.len());
                for (i, tuple) in gs.iter().enumerate() {
                    if tuple.len() != fields.len() {
                        return Err(field_err(
                            format!("generators[{i}]"),
                            format!("expected one matrix per factor ({})", fields.len()),
                        ));
                    }
                    let t = tuple
                        .iter()
                        .zip(&fields)
                        .enumerate()
                        .map(|(j, (m, f))| matrix::<2>(f, &format!("generators[{i}][{j}]"), m))
                        .collect::<Result<Vec<_>, _>>()?;
                    generators.push(t);
                }
                Ok(ProductInput::Explicit { fields, generators })
            }
            _ => Err(field_err("", "give either factors + generators or h_ell")),
        }
    }
}

/// Ranges for the inertia campaigns. The cubic campaign runs over primes in
/// `[max(l_min, 11), l_max]`, the lower-bound campaign for genus `g` over
/// `[max(l_min, g + 2), min(l_max, 47)]`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InertiaDoc {
    #[serde(default)]
    pub l_min: Option<u64>,
    pub l_max: u64,
    #[serde(default = "all_genera")]
    pub genera: Vec<u32>,
}

pub fn all_genera() -> Vec<u32> {
    vec![1, 2, 3, 4]
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIVIAL: &str = r#"{
        "degree_K": 1, "faltings_height": "1/1", "dim": 2,
        "endo_type": {"kind": "TrivialEndo"},
        "ramified_primes_K": [], "non_semistable_primes": ["2"], "endos_over_K": true
    }"#;

    #[test]
    fn schema_violations_name_the_field() {
        let missing = TRIVIAL.replace("\"faltings_height\": \"1/1\",", "");
        let e = from_json_checked::<DescriptorDoc>(Schema::Descriptor, &missing).unwrap_err();
        assert!(e.to_string().contains("faltings_height"), "{e}");
        let bad = TRIVIAL.replace("\"dim\": 2", "\"dim\": 0");
        let e = from_json_checked::<DescriptorDoc>(Schema::Descriptor, &bad).unwrap_err();
        assert!(e.to_string().starts_with("/dim:"), "{e}");
        assert!(from_json_checked::<DescriptorDoc>(Schema::Descriptor, TRIVIAL).is_ok());
    }

    #[test]
    fn descriptor_roundtrip() {
        let d = from_json::<DescriptorDoc>(TRIVIAL).unwrap().to_descriptor().unwrap();
        assert_eq!(d.degree_k, 1);
        assert_eq!(d.non_semistable_primes, vec![2]);
        assert_eq!(d.endo_type, EndoType::TrivialEndo);
    }

    #[test]
    fn unknown_and_missing_fields_rejected() {
        let extra = TRIVIAL.replace("\"dim\": 2,", "\"dim\": 2, \"cm\": false,");
        let e = from_json::<DescriptorDoc>(&extra).unwrap_err();
        assert!(e.to_string().contains("unknown field `cm`"), "{e}");
        let missing = TRIVIAL.replace("\"faltings_height\": \"1/1\",", "");
        let e = from_json::<DescriptorDoc>(&missing).unwrap_err();
        assert!(e.to_string().contains("missing field `faltings_height`"), "{e}");
        let nested = TRIVIAL.replace(r#""kind": "TrivialEndo""#, r#""kind": "TrivialEndo", "delta": "6""#);
        assert!(from_json::<DescriptorDoc>(&nested).is_err());
    }

    #[test]
    fn field_level_diagnostics() {
        let bad = TRIVIAL.replace("\"1/1\"", "\"one\"");
        let e = from_json::<DescriptorDoc>(&bad).unwrap().to_descriptor().unwrap_err();
        assert!(e.to_string().starts_with("faltings_height:"), "{e}");
        let bad = TRIVIAL.replace("[\"2\"]", "[\"2\", \"9\"]");
        let e = from_json::<DescriptorDoc>(&bad).unwrap().to_descriptor().unwrap_err();
        assert_eq!(e.to_string(), "non_semistable_primes[1]: 9 is not prime");
    }

    #[test]
    fn disc_k_supplies_ramified_primes() {
        let doc = TRIVIAL.replace("\"ramified_primes_K\": []", "\"disc_K\": \"-15\"");
        let d = from_json::<DescriptorDoc>(&doc).unwrap().to_descriptor().unwrap();
        assert_eq!(d.ramified_primes_k, vec![3, 5]);
        let none = TRIVIAL.replace("\"ramified_primes_K\": [],", "");
        assert!(from_json::<DescriptorDoc>(&none).unwrap().to_descriptor().is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("h", "-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("h", "7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("h", "1/0").is_err());
        assert!(parse_rational("h", "1.5").is_err());
    }

    #[test]
    fn extension_field_entries() {
        let doc = r#"{"l": 5, "degree": 2, "generators": [[[[0, 1], 0], [0, 1]]]}"#;
        let g = from_json::<Gl2Doc>(doc).unwrap().to_group().unwrap();
        assert_eq!(g.field.order(), 25);
        let bad = r#"{"l": 5, "generators": [[[[0, 1], 0], [0, 1]]]}"#;
        assert!(from_json::<Gl2Doc>(bad).unwrap().to_group().is_err());
        let singular = r#"{"l": 7, "generators": [[[1, 2], [2, 4]]]}"#;
        let e = from_json::<Gl2Doc>(singular).unwrap().to_group().unwrap_err();
        assert_eq!(e.to_string(), "generators[0]: matrix is singular");
    }

    #[test]
    fn gsp4_rejects_non_similitudes() {
        let doc = r#"{"l": 11, "form": "standard", "generators": [[[2,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]]}"#;
        let e = from_json::<Gsp4Doc>(doc).unwrap().to_group().unwrap_err();
        assert!(e.to_string().starts_with("generators[0]:"), "{e}");
    }
}
