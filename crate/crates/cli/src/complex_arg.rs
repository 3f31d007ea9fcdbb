use num_complex::Complex64;

/// Parses `a+bi`, `a-bi`, `bi`, `-i`, `a` (spaces ignored, exponents allowed).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?}; expected a+bi");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not a leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| bad())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated list of complex numbers.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',').map(parse_complex).collect()
}
