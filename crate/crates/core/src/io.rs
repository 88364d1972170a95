//! JSON documents read and written by the command-line tool.
//!
//! Every reader reports failures as [`Error::Malformed`] with a location:
//! the line and column for syntax errors, a field path for shape errors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::block_sheaf::{SheafBar, SheafObject, ShmPlus};
use crate::derived::{CochainComplex, GradedBarcode};
use crate::error::{Error, Result};
use crate::field_linear::{Matrix, PrimeField};
use crate::quiver_rep::{Barcode, Interval, Morphism, Orientation, QuiverAn, Representation};

fn malformed(location: impl Into<String>, message: impl ToString) -> Error {
    Error::Malformed { location: location.into(), message: message.to_string() }
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| malformed(format!("line {}, column {}", e.line(), e.column()), e))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value, at: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| malformed(at, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub n: usize,
    pub orientation: String,
    #[serde(default = "default_p")]
    pub p: u32,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<i64>>>,
}

fn default_p() -> u32 {
    2
}

fn matrix_at(field: PrimeField, rows: usize, cols: usize, m: &[Vec<i64>], at: &str) -> Result<Matrix> {
    // an empty matrix may be written as [] or as rows of []
    if rows * cols == 0 && m.iter().all(Vec::is_empty) && (m.is_empty() || m.len() == rows) {
        return Ok(Matrix::zeros(field, rows, cols));
    }
    if m.len() != rows {
        return Err(malformed(at, format!("{} rows given, expected {rows}", m.len())));
    }
    Matrix::from_rows(field, cols, m).map_err(|e| malformed(at, e))
}

impl RepresentationJson {
    pub fn from_rep(m: &Representation) -> Self {
        RepresentationJson {
            n: m.n(),
            orientation: m.quiver().orientation().to_string(),
            p: m.field().characteristic(),
            dims: m.dims().to_vec(),
            maps: m.maps().iter().map(Matrix::to_rows).collect(),
        }
    }

    pub fn to_rep(&self, at: &str) -> Result<Representation> {
        let field = PrimeField::new(self.p).map_err(|e| malformed(format!("{at}.p"), e))?;
        let orientation = Orientation::parse(&self.orientation).map_err(|e| malformed(format!("{at}.orientation"), e))?;
        let q = QuiverAn::new(self.n, orientation).map_err(|e| malformed(format!("{at}.orientation"), e))?;
        if self.dims.len() != self.n {
            return Err(malformed(format!("{at}.dims"), format!("{} entries for n = {}", self.dims.len(), self.n)));
        }
        if self.maps.len() != self.n.saturating_sub(1) {
            return Err(malformed(format!("{at}.maps"), format!("{} maps for {} arrows", self.maps.len(), self.n - 1)));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let (s, t) = q.arrow_ends(k);
                matrix_at(field, self.dims[t], self.dims[s], m, &format!("{at}.maps[{k}]"))
            })
            .collect::<Result<_>>()?;
        Representation::new(q, field, self.dims.clone(), maps).map_err(|e| malformed(at, e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarJson {
    pub b: usize,
    pub d: usize,
    #[serde(default = "default_mult")]
    pub mult: usize,
}

fn default_mult() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarcodeJson {
    pub intervals: Vec<BarJson>,
}

impl BarcodeJson {
    pub fn from_barcode(b: &Barcode) -> Self {
        BarcodeJson { intervals: b.iter().map(|(i, mult)| BarJson { b: i.b, d: i.d, mult }).collect() }
    }

    pub fn to_barcode(&self, at: &str) -> Result<Barcode> {
        let mut out = Barcode::new();
        for (k, bar) in self.intervals.iter().enumerate() {
            let i = Interval::new(bar.b, bar.d).map_err(|e| malformed(format!("{at}.intervals[{k}]"), e))?;
            out.add(i, bar.mult);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDegreeJson {
    pub i: i64,
    pub intervals: Vec<BarJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBarcodeJson {
    pub degrees: Vec<GradedDegreeJson>,
}

impl GradedBarcodeJson {
    pub fn from_graded(g: &GradedBarcode) -> Self {
        GradedBarcodeJson {
            degrees: g
                .iter()
                .map(|(i, b)| GradedDegreeJson { i, intervals: BarcodeJson::from_barcode(b).intervals })
                .collect(),
        }
    }

    pub fn to_graded(&self, at: &str) -> Result<GradedBarcode> {
        let mut g = GradedBarcode::new();
        for (k, d) in self.degrees.iter().enumerate() {
            let b = BarcodeJson { intervals: d.intervals.clone() }.to_barcode(&format!("{at}.degrees[{k}]"))?;
            g.insert(d.i, g.get(d.i).union(&b));
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub degree: i64,
    pub rep: RepresentationJson,
    /// Vertex-wise matrices of `d^degree`, omitted for the zero map.
    #[serde(default)]
    pub differential: Option<Vec<Vec<Vec<i64>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub terms: Vec<TermJson>,
}

impl ComplexJson {
    pub fn to_complex(&self, at: &str) -> Result<CochainComplex> {
        let Some(first) = self.terms.first() else {
            return Err(malformed(format!("{at}.terms"), "a complex needs at least one term to fix its quiver"));
        };
        let r0 = first.rep.to_rep(&format!("{at}.terms[0].rep"))?;
        let (q, field) = (r0.quiver().clone(), r0.field());
        let mut terms = BTreeMap::new();
        for (k, t) in self.terms.iter().enumerate() {
            let r = t.rep.to_rep(&format!("{at}.terms[{k}].rep"))?;
            if terms.insert(t.degree, r).is_some() {
                return Err(malformed(format!("{at}.terms[{k}]"), format!("degree {} appears twice", t.degree)));
            }
        }
        let zero = Representation::zero(&q, field);
        let mut diffs = BTreeMap::new();
        for (k, t) in self.terms.iter().enumerate() {
            let Some(mats) = &t.differential else { continue };
            let here = format!("{at}.terms[{k}].differential");
            let src = terms[&t.degree].clone();
            let dst = terms.get(&(t.degree + 1)).unwrap_or(&zero).clone();
            src.same_category(&dst).map_err(|e| malformed(&here, e))?;
            if mats.len() != q.n() {
                return Err(malformed(&here, format!("{} vertex matrices for n = {}", mats.len(), q.n())));
            }
            let comps = mats
                .iter()
                .enumerate()
                .map(|(x, m)| matrix_at(field, dst.dims()[x], src.dims()[x], m, &format!("{here}[{x}]")))
                .collect::<Result<_>>()?;
            diffs.insert(t.degree, Morphism::new(src, dst, comps).map_err(|e| malformed(&here, e))?);
        }
        CochainComplex::new(q, field, terms, diffs).map_err(|e| malformed(at, e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShmDegreeJson {
    pub i: i64,
    pub bars: Vec<SheafBar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShmPlusJson {
    pub m: usize,
    pub degrees: Vec<ShmDegreeJson>,
}

impl ShmPlusJson {
    pub fn to_shm(&self, at: &str) -> Result<ShmPlus> {
        let mut degrees: BTreeMap<i64, SheafObject> = BTreeMap::new();
        for (k, d) in self.degrees.iter().enumerate() {
            let obj = SheafObject::new(d.bars.clone()).map_err(|e| malformed(format!("{at}.degrees[{k}]"), e))?;
            degrees.entry(d.i).or_default().bars.extend(obj.bars);
        }
        for obj in degrees.values_mut() {
            obj.bars.sort();
        }
        // fragment violations are input errors, not syntax errors
        ShmPlus::new(self.m, degrees)
    }
}

/// Any document the tool accepts, told apart by its keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Representation(Representation),
    Barcode(Barcode),
    Graded(GradedBarcode),
    Complex(CochainComplex),
    Sheaf(SheafObject),
    ShmPlus(ShmPlus),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Representation(_) => "representation",
            Document::Barcode(_) => "barcode",
            Document::Graded(_) => "graded barcode",
            Document::Complex(_) => "complex",
            Document::Sheaf(_) => "sheaf object",
            Document::ShmPlus(_) => "Sh_{m,+} object",
        }
    }
}

pub fn parse_document(text: &str, name: &str) -> Result<Document> {
    let v = parse_value(text).map_err(|e| match e {
        Error::Malformed { location, message } => malformed(format!("{name}: {location}"), message),
        other => other,
    })?;
    let Value::Object(obj) = &v else {
        return Err(malformed(name, "expected a JSON object"));
    };
    let has = |k: &str| obj.contains_key(k);
    if has("dims") {
        Ok(Document::Representation(from_value::<RepresentationJson>(v, name)?.to_rep(name)?))
    } else if has("intervals") {
        Ok(Document::Barcode(from_value::<BarcodeJson>(v, name)?.to_barcode(name)?))
    } else if has("terms") {
        Ok(Document::Complex(from_value::<ComplexJson>(v, name)?.to_complex(name)?))
    } else if has("bars") {
        let raw: SheafObject = from_value(v, name)?;
        Ok(Document::Sheaf(SheafObject::new(raw.bars).map_err(|e| malformed(name, e))?))
    } else if has("m") && has("degrees") {
        Ok(Document::ShmPlus(from_value::<ShmPlusJson>(v, name)?.to_shm(name)?))
    } else if has("degrees") {
        Ok(Document::Graded(from_value::<GradedBarcodeJson>(v, name)?.to_graded(name)?))
    } else {
        Err(malformed(name, "unrecognized document: expected one of dims, intervals, terms, bars, degrees"))
    }
}

pub fn barcode_to_json(b: &Barcode) -> String {
    serde_json::to_string_pretty(&BarcodeJson::from_barcode(b)).expect("barcodes serialize")
}

pub fn graded_to_json(g: &GradedBarcode) -> String {
    serde_json::to_string_pretty(&GradedBarcodeJson::from_graded(g)).expect("graded barcodes serialize")
}

pub fn representation_to_json(m: &Representation) -> String {
    serde_json::to_string_pretty(&RepresentationJson::from_rep(m)).expect("representations serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver_rep::decompose;

    #[test]
    fn representation_round_trip() {
        let q = QuiverAn::new(3, Orientation::parse("fb").unwrap()).unwrap();
        let f = PrimeField::new(3).unwrap();
        let b = Barcode::from_intervals([Interval { b: 1, d: 2 }, Interval { b: 2, d: 3 }, Interval { b: 3, d: 3 }]);
        let m = Representation::from_barcode(&q, f, &b).unwrap();
        let text = representation_to_json(&m);
        match parse_document(&text, "m.json").unwrap() {
            Document::Representation(r) => {
                assert_eq!(r, m);
                assert_eq!(decompose(&r), b);
            }
            other => panic!("parsed as {}", other.kind()),
        }
    }

    #[test]
    fn zero_dimensional_maps() {
        let text = r#"{"n": 2, "orientation": "f", "p": 2, "dims": [1, 0], "maps": [[]]}"#;
        let Document::Representation(r) = parse_document(text, "z").unwrap() else { panic!() };
        assert_eq!(decompose(&r), Barcode::from_intervals([Interval { b: 1, d: 1 }]));
    }

    #[test]
    fn malformed_locations() {
        let err = parse_document("{\"intervals\": [", "a.json").unwrap_err();
        assert!(matches!(&err, Error::Malformed { location, .. } if location.starts_with("a.json: line 1")), "{err}");
        let err = parse_document(r#"{"intervals": [{"b": 3, "d": 1}]}"#, "a.json").unwrap_err();
        assert!(matches!(&err, Error::Malformed { location, .. } if location == "a.json.intervals[0]"), "{err}");
        let text = r#"{"n": 2, "orientation": "f", "p": 2, "dims": [1, 1], "maps": [[[1, 0]]]}"#;
        let err = parse_document(text, "r").unwrap_err();
        assert!(matches!(&err, Error::Malformed { location, .. } if location == "r.maps[0]"), "{err}");
        assert!(parse_document("[]", "x").is_err());
    }

    #[test]
    fn graded_and_sheaf_documents() {
        let text = r#"{"degrees": [{"i": -1, "intervals": [{"b": 1, "d": 2, "mult": 2}]}, {"i": 0, "intervals": []}]}"#;
        let Document::Graded(g) = parse_document(text, "g").unwrap() else { panic!() };
        assert_eq!(g.get(-1).num_bars(), 2);
        let back = graded_to_json(&g);
        assert_eq!(parse_document(&back, "g").unwrap(), Document::Graded(g));

        let text = r#"{"bars": [{"lo": 1, "hi": 4, "lo_closed": false, "hi_closed": true}]}"#;
        let Document::Sheaf(s) = parse_document(text, "s").unwrap() else { panic!() };
        assert!(!s.has_open_summand());

        let text = r#"{"m": 3, "degrees": [{"i": 0, "bars": [{"lo": 1, "hi": 5, "lo_closed": true, "hi_closed": false}]}]}"#;
        let err = parse_document(text, "s").unwrap_err();
        assert!(err.to_string().contains("[1,5)"), "{err}");
    }

    #[test]
    fn complex_document() {
        let rep = |dims: [usize; 2]| RepresentationJson {
            n: 2,
            orientation: "f".into(),
            p: 2,
            dims: dims.to_vec(),
            maps: vec![if dims == [1, 1] { vec![vec![1]] } else { vec![vec![]; dims[1]] }],
        };
        // P_2 ↪ P_1 has cohomology I[1,1] in degree 1
        let c = ComplexJson {
            terms: vec![
                TermJson { degree: 0, rep: rep([0, 1]), differential: Some(vec![vec![], vec![vec![1]]]) },
                TermJson { degree: 1, rep: rep([1, 1]), differential: None },
            ],
        };
        let text = serde_json::to_string(&c).unwrap();
        let Document::Complex(x) = parse_document(&text, "c").unwrap() else { panic!() };
        assert_eq!(decompose(&x.cohomology(1)), Barcode::from_intervals([Interval { b: 1, d: 1 }]));
        assert!(x.cohomology(0).is_zero());
    }
}
