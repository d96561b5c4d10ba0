use std::fs;

use crate::channel::spec::ChannelSpec;
use crate::walk::Window;

use super::CliError;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number(s: &str) -> Result<f64, CliError> {
    let x: f64 = s.trim().parse().map_err(|_| bad(format!("not a number: {s:?}")))?;
    if !x.is_finite() {
        return Err(bad(format!("not a finite number: {s:?}")));
    }
    Ok(x)
}

/// `a,b,c`.
pub fn parse_vec3(s: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<f64> = s.split(',').map(number).collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| bad(format!("expected three comma-separated numbers, got {s:?}")))
}

/// `a,b,c` or `start:stop:step` (stop included up to rounding); must be
/// nonempty and strictly increasing.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let values = if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(number).collect::<Result<_, _>>()?;
        let [start, stop, step]: [f64; 3] = parts
            .try_into()
            .map_err(|_| bad(format!("range must be start:stop:step, got {s:?}")))?;
        if !(step > 0.0) || stop < start {
            return Err(bad(format!("range {s:?} needs step > 0 and stop >= start")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        s.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(bad(format!("grid {s:?} is not strictly increasing")));
    }
    Ok(values)
}

/// `n1,n2,...` of positive counts.
pub fn parse_counts(s: &str) -> Result<Vec<usize>, CliError> {
    let counts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| bad(format!("not a site count: {p:?}"))))
        .collect::<Result<_, _>>()?;
    if counts.iter().any(|&n| n == 0) {
        return Err(bad("site counts must be at least 1"));
    }
    Ok(counts)
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
pub fn parse_channel_arg(arg: &str) -> Result<ChannelSpec, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| bad(format!("cannot read channel file {arg:?}: {e}")))?
    };
    Ok(ChannelSpec::parse(&text)?)
}

/// A letter of a moment word: Pauli component and optional window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordLetter {
    pub component: usize,
    pub window: Option<Window>,
}

fn component(c: char) -> Option<usize> {
    match c.to_ascii_uppercase() {
        'X' => Some(0),
        'Y' => Some(1),
        'Z' => Some(2),
        _ => None,
    }
}

/// Letters `X`, `Y`, `Z`, each optionally followed by `@a:b` for the
/// window `(a, b]`; commas, spaces and `*` between letters are ignored.
/// Example: `X@0:0.5Y@0.5:1`.
pub fn parse_word(s: &str) -> Result<Vec<WordLetter>, CliError> {
    let chars: Vec<char> = s.chars().collect();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        if matches!(c, ',' | ' ' | '*') {
            continue;
        }
        let comp = component(c).ok_or_else(|| bad(format!("unknown letter {c:?} in word {s:?}")))?;
        let mut window = None;
        if i < chars.len() && chars[i] == '@' {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && component(chars[end]).is_none() && !matches!(chars[end], ',' | ' ' | '*') {
                end += 1;
            }
            let spec: String = chars[start..end].iter().collect();
            let (a, b) = spec
                .split_once(':')
                .ok_or_else(|| bad(format!("window {spec:?} must be a:b")))?;
            let w = Window::new(number(a)?, number(b)?).map_err(|e| bad(e.to_string()))?;
            window = Some(w);
            i = end;
        }
        letters.push(WordLetter { component: comp, window });
    }
    if letters.is_empty() {
        return Err(bad(format!("word {s:?} has no letters")));
    }
    Ok(letters)
}
