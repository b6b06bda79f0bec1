use std::fs;
use std::path::Path;

/// Non-empty lines of an expression file with `#` comments removed, paired
/// with their 1-based line numbers.
pub fn read_expressions(path: &Path) -> Result<Vec<(usize, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(expressions(&text))
}

pub fn expressions(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| (i + 1, body.to_string()))
        })
        .collect()
}

/// Identifiers in order of first appearance. Bracketed suffixes such as
/// `E[1,0,2]` are part of the identifier.
pub fn identifiers<'a>(exprs: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for e in exprs {
        let chars: Vec<char> = e.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '[' {
                    if let Some(p) = chars[i..].iter().position(|&ch| ch == ']') {
                        i += p + 1;
                    }
                }
                let name: String = chars[start..i].iter().collect();
                if !out.contains(&name) {
                    out.push(name);
                }
            } else if c.is_ascii_digit() {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
    }
    out
}
