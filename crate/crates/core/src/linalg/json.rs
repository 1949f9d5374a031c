//! JSON forms of matrices: `{"rows","cols","re":[[..]],"im":[[..]]}`, with exact
//! entries written as `{"num":"p","den":"q"}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::charpoly::{ExactPolynomial, PolynomialCoefficients};
use super::gaussian::GaussianRational;
use super::matrix::{ComplexMatrix, GaussianRationalMatrix};

#[derive(Serialize, Deserialize)]
struct Wire<T> {
    rows: usize,
    cols: usize,
    re: Vec<Vec<T>>,
    im: Vec<Vec<T>>,
}

/// Exact rational entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: IntJson,
    pub den: IntJson,
}

/// Integers travel as decimal strings so that big values survive; plain
/// JSON integers are accepted on input.
#[derive(Clone, Debug, PartialEq)]
pub struct IntJson(pub BigInt);

impl Serialize for IntJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for IntJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => BigInt::from_str(&s).map(IntJson).map_err(D::Error::custom),
            Raw::I(i) => Ok(IntJson(BigInt::from(i))),
        }
    }
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        RationalJson {
            num: IntJson(r.numer().clone()),
            den: IntJson(r.denom().clone()),
        }
    }
}

impl TryFrom<&RationalJson> for BigRational {
    type Error = String;
    fn try_from(r: &RationalJson) -> Result<Self, String> {
        if r.den.0.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(r.num.0.clone(), r.den.0.clone()))
    }
}

/// `{"re": <rational>, "im": <rational>}` with rationals as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianJson {
    pub re: String,
    pub im: String,
}

impl From<&GaussianRational> for GaussianJson {
    fn from(z: &GaussianRational) -> Self {
        GaussianJson {
            re: z.re.to_string(),
            im: z.im.to_string(),
        }
    }
}

impl TryFrom<&GaussianJson> for GaussianRational {
    type Error = String;
    fn try_from(z: &GaussianJson) -> Result<Self, String> {
        let re = BigRational::from_str(&z.re).map_err(|e| e.to_string())?;
        let im = BigRational::from_str(&z.im).map_err(|e| e.to_string())?;
        Ok(GaussianRational::new(re, im))
    }
}

fn check_shape<T, E: serde::de::Error>(w: &Wire<T>) -> Result<(), E> {
    let ok = w.re.len() == w.rows
        && w.im.len() == w.rows
        && w.re.iter().chain(&w.im).all(|r| r.len() == w.cols);
    if ok {
        Ok(())
    } else {
        Err(E::custom(format!("entries do not match a {}x{} shape", w.rows, w.cols)))
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (r, c) = (self.rows(), self.cols());
        Wire {
            rows: r,
            cols: c,
            re: (0..r).map(|i| (0..c).map(|j| self.get(i, j).re).collect()).collect(),
            im: (0..r).map(|i| (0..c).map(|j| self.get(i, j).im).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::<f64>::deserialize(d)?;
        check_shape::<_, D::Error>(&w)?;
        let m = ComplexMatrix::from_fn(w.rows, w.cols, |i, j| Complex64::new(w.re[i][j], w.im[i][j]));
        if !m.is_finite() {
            return Err(D::Error::custom("non-finite matrix entry"));
        }
        Ok(m)
    }
}

impl Serialize for GaussianRationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (r, c) = (self.rows(), self.cols());
        Wire {
            rows: r,
            cols: c,
            re: (0..r)
                .map(|i| (0..c).map(|j| RationalJson::from(&self.get(i, j).re)).collect())
                .collect(),
            im: (0..r)
                .map(|i| (0..c).map(|j| RationalJson::from(&self.get(i, j).im)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::<RationalJson>::deserialize(d)?;
        check_shape::<_, D::Error>(&w)?;
        let mut data = Vec::with_capacity(w.rows * w.cols);
        for i in 0..w.rows {
            for j in 0..w.cols {
                let re = BigRational::try_from(&w.re[i][j]).map_err(D::Error::custom)?;
                let im = BigRational::try_from(&w.im[i][j]).map_err(D::Error::custom)?;
                data.push(GaussianRational::new(re, im));
            }
        }
        GaussianRationalMatrix::from_vec(w.rows, w.cols, data).map_err(D::Error::custom)
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GaussianJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = GaussianJson::deserialize(d)?;
        GaussianRational::try_from(&w).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

impl Serialize for PolynomialCoefficients {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<ComplexJson> = self
            .coefficients
            .iter()
            .map(|z| ComplexJson { re: z.re, im: z.im })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolynomialCoefficients {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<ComplexJson>::deserialize(d)?;
        if v.is_empty() {
            return Err(D::Error::custom("empty polynomial"));
        }
        Ok(PolynomialCoefficients {
            coefficients: v.into_iter().map(|z| Complex64::new(z.re, z.im)).collect(),
        })
    }
}

impl Serialize for ExactPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coefficients.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coefficients = Vec::<GaussianRational>::deserialize(d)?;
        if coefficients.is_empty() {
            return Err(D::Error::custom("empty polynomial"));
        }
        Ok(ExactPolynomial { coefficients })
    }
}

/// `serde(with)` adapters writing `Complex64` as `{"re", "im"}`.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        ComplexJson { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let w = ComplexJson::deserialize(d)?;
        Ok(Complex64::new(w.re, w.im))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
            let w: Vec<ComplexJson> = v.iter().map(|z| ComplexJson { re: z.re, im: z.im }).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
            let w = Vec::<ComplexJson>::deserialize(d)?;
            Ok(w.into_iter().map(|z| Complex64::new(z.re, z.im)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar::complex_gaussian;
    use proptest::prelude::*;

    #[test]
    fn complex_layout() {
        let m = ComplexMatrix::from_vec(1, 2, vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0)]).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["rows"], 1);
        assert_eq!(v["re"][0][1], -0.5);
        assert_eq!(v["im"][0][0], 2.0);
    }

    #[test]
    fn exact_layout_and_int_input() {
        let m = GaussianRationalMatrix::diag(&[GaussianRational::from_ints(0, -3)]);
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["im"][0][0]["num"], "-3");
        let text = r#"{"rows":1,"cols":1,"re":[[{"num":1,"den":2}]],"im":[[{"num":"0","den":"1"}]]}"#;
        let back: GaussianRationalMatrix = serde_json::from_str(text).unwrap();
        assert_eq!(back.get(0, 0).to_complex(), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn malformed_shape_rejected() {
        let text = r#"{"rows":2,"cols":1,"re":[[1.0]],"im":[[0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(text).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(seed in 0u64..500, r in 1usize..5, c in 1usize..5) {
            let m = complex_gaussian(r, c, seed);
            let text = serde_json::to_string(&m).unwrap();
            let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &m);
            let e = m.to_exact().unwrap();
            let back: GaussianRationalMatrix = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
