//! Text format for vector sets.
//!
//! ```text
//! # comment
//! 1, 0, 0, 0
//! 1/2, -1, 0, 3
//! [bases]
//! 0, 1, 2, 3
//! ```
//!
//! One vector per line as comma-separated integers or `p/q` rationals. An
//! optional `[bases]` section lists 0-based index tuples, one per line.

use num_rational::BigRational;

use super::{OrthoError, RationalVector, VectorSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFile {
    pub vectors: VectorSet,
    pub bases: Option<Vec<Vec<usize>>>,
}

fn is_bases_header(line: &str) -> bool {
    matches!(line.to_ascii_lowercase().as_str(), "[bases]" | "bases" | "bases:")
}

pub fn parse_vector_file(text: &str) -> Result<VectorFile, OrthoError> {
    let mut vectors = Vec::new();
    let mut bases: Option<Vec<Vec<usize>>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| OrthoError::Parse { line: line_no, reason };
        if is_bases_header(line) {
            if bases.is_some() {
                return Err(err("second [bases] section".into()));
            }
            bases = Some(Vec::new());
            continue;
        }
        let fields = line.split(',').map(str::trim);
        match bases.as_mut() {
            None => {
                let coords = fields
                    .map(|f| {
                        if f.ends_with("/0") {
                            return Err(err(format!("zero denominator in {f:?}")));
                        }
                        f.parse::<BigRational>().map_err(|_| err(format!("not a rational: {f:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let v = RationalVector::new(coords).map_err(|e| err(e.to_string()))?;
                vectors.push(v);
            }
            Some(list) => {
                let tuple = fields
                    .map(|f| f.parse::<usize>().map_err(|_| err(format!("not an index: {f:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                list.push(tuple);
            }
        }
    }
    let vectors = VectorSet::new(vectors)?;
    if let Some(list) = &bases {
        for (b, tuple) in list.iter().enumerate() {
            if let Some(&bad) = tuple.iter().find(|&&i| i >= vectors.len()) {
                return Err(OrthoError::InvalidArgument(format!(
                    "basis {b} references vector {bad}, only {} vectors",
                    vectors.len()
                )));
            }
        }
    }
    Ok(VectorFile { vectors, bases })
}

pub fn format_vector_file(vectors: &VectorSet, bases: Option<&[Vec<usize>]>, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    for v in vectors.vectors() {
        let parts: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&parts.join(","));
        out.push('\n');
    }
    if let Some(bases) = bases {
        out.push_str("[bases]\n");
        for b in bases {
            let parts: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            out.push_str(&parts.join(","));
            out.push('\n');
        }
    }
    out
}
