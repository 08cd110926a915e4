//! Input parsing: samples (JSON or CSV), matrix files, polynomial inputs.
//!
//! Every parse error names the line or field it came from; those errors all
//! map to exit code 1.

use std::fs;
use std::io::Read;

use serde::Deserialize;

/// A structured parse failure with a human diagnostic.
#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn fail<T>(msg: String) -> Result<T, ParseError> {
    Err(ParseError(msg))
}

/// Read a file, or stdin when the path is `-`.
pub fn read_source(path: &str) -> Result<String, ParseError> {
    if path == "-" {
        let mut buf = String::new();
        match std::io::stdin().read_to_string(&mut buf) {
            Ok(_) => Ok(buf),
            Err(e) => fail(format!("stdin: {e}")),
        }
    } else {
        fs::read_to_string(path).map_err(|e| ParseError(format!("{path}: {e}")))
    }
}

#[derive(Deserialize)]
struct SampleJson {
    values: Vec<f64>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

/// A sample as `{"values": [...], "weights": [...]}` JSON or `value,weight`
/// CSV with a header row. The weights may be absent in either format (equal
/// weights are then assumed downstream).
pub fn parse_sample(path: &str) -> Result<(Vec<f64>, Option<Vec<f64>>), ParseError> {
    let text = read_source(path)?;
    if text.trim_start().starts_with('{') {
        let parsed: SampleJson = serde_json::from_str(&text)
            .map_err(|e| ParseError(format!("{path}: JSON sample: {e}")))?;
        return Ok((parsed.values, parsed.weights));
    }
    parse_sample_csv(path, &text)
}

fn parse_sample_csv(path: &str, text: &str) -> Result<(Vec<f64>, Option<Vec<f64>>), ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| ParseError(format!("{path}: {e}")))?
        .clone();
    let value_col = match headers.iter().position(|h| h == "value") {
        Some(i) => i,
        None => return fail(format!("{path}: header row must contain a `value` column")),
    };
    let weight_col = headers.iter().position(|h| h == "weight");

    let mut values = Vec::new();
    let mut weights = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let record = record.map_err(|e| ParseError(format!("{path}: {e}")))?;
        let field = |col: usize, name: &str| -> Result<f64, ParseError> {
            let raw = record.get(col).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| ParseError(format!("{path}: line {line}: bad {name} `{raw}`")))
        };
        values.push(field(value_col, "value")?);
        if let Some(col) = weight_col {
            weights.push(field(col, "weight")?);
        }
    }
    if values.is_empty() {
        return fail(format!("{path}: no data rows"));
    }
    Ok((values, weight_col.map(|_| weights)))
}

/// Matrix file: first line `n`, then `n` lines of `n` whitespace-separated
/// reals. Near-symmetric input (relative deviation at most 1e-8 per entry
/// pair) is symmetrized by averaging; anything worse is rejected.
pub fn parse_matrix(path: &str) -> Result<(usize, Vec<f64>), ParseError> {
    let text = read_source(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());

    let (first_no, first) = match lines.next() {
        Some(pair) => pair,
        None => return fail(format!("{path}: empty file")),
    };
    let n: usize = match first.trim().parse() {
        Ok(n) => n,
        Err(_) => {
            return fail(format!(
                "{path}: line {}: expected the order n, got `{}`",
                first_no + 1,
                first.trim()
            ))
        }
    };
    if n == 0 {
        return fail(format!("{path}: line {}: order must be positive", first_no + 1));
    }

    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let (line_no, line) = match lines.next() {
            Some(pair) => pair,
            None => return fail(format!("{path}: expected {n} rows, got {row}")),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != n {
            return fail(format!(
                "{path}: line {}: expected {n} entries, got {}",
                line_no + 1,
                fields.len()
            ));
        }
        for raw in fields {
            match raw.parse::<f64>() {
                Ok(x) => entries.push(x),
                Err(_) => {
                    return fail(format!(
                        "{path}: line {}: bad entry `{raw}`",
                        line_no + 1
                    ))
                }
            }
        }
    }

    // Symmetrize, rejecting genuine asymmetry.
    for i in 0..n {
        for j in (i + 1)..n {
            let upper = entries[i * n + j];
            let lower = entries[j * n + i];
            let scale = upper.abs().max(lower.abs());
            if (upper - lower).abs() > 1e-8 * scale.max(1.0) {
                return fail(format!(
                    "{path}: entries ({i},{j}) = {upper} and ({j},{i}) = {lower} \
                     differ beyond the symmetry tolerance"
                ));
            }
            let mean = 0.5 * (upper + lower);
            entries[i * n + j] = mean;
            entries[j * n + i] = mean;
        }
    }
    Ok((n, entries))
}

/// Polynomial input: an inline comma-separated list, a file path, or `-` for
/// stdin; the content itself is a JSON array or a bare comma/whitespace list.
pub fn parse_number_list(input: &str) -> Result<Vec<f64>, ParseError> {
    let text = if input == "-" || std::path::Path::new(input).is_file() {
        read_source(input)?
    } else {
        input.to_string()
    };
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str::<Vec<f64>>(trimmed)
            .map_err(|e| ParseError(format!("JSON number list: {e}")));
    }
    let mut out = Vec::new();
    for raw in trimmed.split(|c: char| c == ',' || c.is_whitespace()) {
        if raw.is_empty() {
            continue;
        }
        match raw.parse::<f64>() {
            Ok(x) => out.push(x),
            Err(_) => return fail(format!("bad number `{raw}`")),
        }
    }
    if out.is_empty() {
        return fail("empty number list".into());
    }
    Ok(out)
}

/// `--weights 0.2,0.3,0.5` style list.
pub fn parse_weights(list: &str) -> Result<Vec<f64>, ParseError> {
    parse_number_list(list)
}
