//! Matrix files: a structured JSON record (canonical) and a plain text form.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::numkernel::{CMatrix, C};

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub matrix: CMatrix,
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Structured => "json",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    n: usize,
    rows: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    provenance: Option<String>,
}

impl MatrixFile {
    pub fn new(matrix: CMatrix) -> Self {
        Self {
            matrix,
            name: None,
            seed: None,
            provenance: None,
        }
    }

    pub fn named(matrix: CMatrix, name: &str) -> Self {
        Self {
            name: Some(name.to_string()),
            ..Self::new(matrix)
        }
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Parses either format; a leading `{` selects the structured one.
    pub fn parse(text: &str) -> Result<Self, String> {
        if text.trim_start().starts_with('{') {
            parse_structured(text)
        } else {
            parse_text(text).map(Self::new)
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => self.to_structured(),
            Format::Text => to_text(&self.matrix),
        }
    }

    /// JSON with every entry written to 17 significant digits.
    pub fn to_structured(&self) -> String {
        let n = self.matrix.nrows();
        let mut s = String::new();
        let _ = write!(s, "{{\n  \"n\": {n},\n  \"rows\": [\n");
        for i in 0..n {
            s.push_str("    [");
            for j in 0..n {
                let z = self.matrix[(i, j)];
                let _ = write!(s, "[{:.16e}, {:.16e}]", z.re, z.im);
                if j + 1 < n {
                    s.push_str(", ");
                }
            }
            s.push(']');
            if i + 1 < n {
                s.push(',');
            }
            s.push('\n');
        }
        s.push_str("  ]");
        let quote = |x: &str| serde_json::to_string(x).expect("strings serialize");
        if let Some(name) = &self.name {
            let _ = write!(s, ",\n  \"name\": {}", quote(name));
        }
        if let Some(seed) = self.seed {
            let _ = write!(s, ",\n  \"seed\": {seed}");
        }
        if let Some(p) = &self.provenance {
            let _ = write!(s, ",\n  \"provenance\": {}", quote(p));
        }
        s.push_str("\n}\n");
        s
    }
}

fn parse_structured(text: &str) -> Result<MatrixFile, String> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if raw.n == 0 {
        return Err("dimension must be positive".into());
    }
    if raw.rows.len() != raw.n || raw.rows.iter().any(|r| r.len() != raw.n) {
        return Err(format!("rows do not form a {0}x{0} matrix", raw.n));
    }
    let matrix = CMatrix::from_fn(raw.n, raw.n, |i, j| {
        let [re, im] = raw.rows[i][j];
        C::new(re, im)
    });
    check_finite(&matrix)?;
    Ok(MatrixFile {
        matrix,
        name: raw.name,
        seed: raw.seed,
        provenance: raw.provenance,
    })
}

fn check_finite(m: &CMatrix) -> Result<(), String> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err("non-finite entry".into())
    }
}

/// One complex token: `re`, `imi`, `re+imi` or `re-imi`.
pub fn parse_complex(tok: &str) -> Result<C, String> {
    let bad = || format!("malformed complex number {tok:?}");
    let Some(body) = tok.strip_suffix('i') else {
        return tok
            .parse::<f64>()
            .map(|re| C::new(re, 0.0))
            .map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(C::new(re, im))
}

fn parse_text(text: &str) -> Result<CMatrix, String> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or("empty matrix file")?
        .parse()
        .map_err(|_| "first line must be the dimension")?;
    if n == 0 {
        return Err("dimension must be positive".into());
    }
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or(format!("expected {n} rows, found {i}"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n {
            return Err(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                toks.len()
            ));
        }
        for (j, t) in toks.iter().enumerate() {
            m[(i, j)] = parse_complex(t)?;
        }
    }
    if lines.next().is_some() {
        return Err("trailing content after the last row".into());
    }
    check_finite(&m)?;
    Ok(m)
}

pub fn to_text(m: &CMatrix) -> String {
    let n = m.nrows();
    let mut s = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let z = m[(i, j)];
                format!("{:.16e}{:+.16e}i", z.re, z.im)
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}
