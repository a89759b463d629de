//! The plain-text diagram format.
//!
//! ```text
//! # a 1-colored circle for sl_2
//! n=2 m=2 N=2 kind=linear
//! source = 2 0
//! E 1 1
//! F 1 1
//! ```
//!
//! Layer lines are `E i k`, `F i k`, `X+ i`, `X- i`, `TW i h`, and in annular
//! files also `E0 k`, `F0 k`, `ROT +1` and `ROT -1`.

use std::fmt::Write as _;

use webskein_core::braiding::Sign;
use webskein_core::ladder::{DiagramKind, LadderDiagram, Layer};
use webskein_core::Object;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

struct Header {
    n: u32,
    m: usize,
    total: i32,
    kind: DiagramKind,
}

fn parse_header(line: usize, text: &str) -> Result<Header, ParseError> {
    let (mut n, mut m, mut total, mut kind) = (None, None, None, None);
    for field in text.split_whitespace() {
        let Some((key, value)) = field.split_once('=') else {
            return Err(err(line, format!("expected key=value, found `{}`", field)));
        };
        let bad = || err(line, format!("bad value for {}: `{}`", key, value));
        match key {
            "n" => n = Some(value.parse::<u32>().map_err(|_| bad())?),
            "m" => m = Some(value.parse::<usize>().map_err(|_| bad())?),
            "N" => total = Some(value.parse::<i32>().map_err(|_| bad())?),
            "kind" => {
                kind = Some(match value {
                    "linear" => DiagramKind::Linear,
                    "annular" => DiagramKind::Annular,
                    _ => return Err(bad()),
                })
            }
            _ => return Err(err(line, format!("unknown header key `{}`", key))),
        }
    }
    let missing = |k: &str| err(line, format!("header is missing `{}`", k));
    let h = Header {
        n: n.ok_or_else(|| missing("n"))?,
        m: m.ok_or_else(|| missing("m"))?,
        total: total.ok_or_else(|| missing("N"))?,
        kind: kind.ok_or_else(|| missing("kind"))?,
    };
    if h.n == 0 || h.m == 0 {
        return Err(err(line, "n and m must be positive"));
    }
    Ok(h)
}

fn parse_source(line: usize, text: &str, h: &Header) -> Result<Vec<i32>, ParseError> {
    let rest = text
        .strip_prefix("source")
        .and_then(|r| r.trim_start().strip_prefix('='))
        .ok_or_else(|| err(line, "expected `source = a1 ... am`"))?;
    let entries = rest
        .split_whitespace()
        .map(|t| t.parse::<i32>().map_err(|_| err(line, format!("bad entry `{}`", t))))
        .collect::<Result<Vec<_>, _>>()?;
    if entries.len() != h.m {
        return Err(err(line, format!("source has {} entries, header says m={}", entries.len(), h.m)));
    }
    if entries.iter().sum::<i32>() != h.total {
        return Err(err(line, format!("source sums to {}, header says N={}", entries.iter().sum::<i32>(), h.total)));
    }
    Ok(entries)
}

fn parse_layer(line: usize, text: &str, h: &Header) -> Result<Layer, ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let arg = |ix: usize| -> Result<&str, ParseError> {
        toks.get(ix).copied().ok_or_else(|| err(line, format!("`{}` needs more arguments", toks[0])))
    };
    let pos = |ix: usize| -> Result<usize, ParseError> {
        let s = arg(ix)?;
        let p = s.parse::<usize>().map_err(|_| err(line, format!("bad position `{}`", s)))?;
        if p == 0 || p >= h.m {
            return Err(err(line, format!("position {} outside 1..{}", p, h.m)));
        }
        Ok(p)
    };
    let label = |ix: usize| -> Result<u32, ParseError> {
        let s = arg(ix)?;
        let k = s.parse::<u32>().map_err(|_| err(line, format!("bad label `{}`", s)))?;
        if k > h.n {
            return Err(err(line, format!("label {} exceeds n={}", k, h.n)));
        }
        Ok(k)
    };
    let arity = match toks[0] {
        "E" | "F" | "TW" => 3,
        "X+" | "X-" | "E0" | "F0" | "ROT" => 2,
        other => return Err(err(line, format!("unknown keyword `{}`", other))),
    };
    if toks.len() != arity {
        return Err(err(line, format!("`{}` takes {} arguments", toks[0], arity - 1)));
    }
    let layer = match toks[0] {
        "E" => Layer::RungE(pos(1)?, label(2)?),
        "F" => Layer::RungF(pos(1)?, label(2)?),
        "X+" => Layer::Crossing(pos(1)?, Sign::Pos),
        "X-" => Layer::Crossing(pos(1)?, Sign::Neg),
        "TW" => {
            let p = arg(1)?.parse::<usize>().map_err(|_| err(line, "bad twist position"))?;
            if p == 0 || p > h.m {
                return Err(err(line, format!("twist position {} outside 1..={}", p, h.m)));
            }
            let t = arg(2)?.parse::<i32>().map_err(|_| err(line, "bad half-twist count"))?;
            Layer::Twist(p, t)
        }
        "E0" => Layer::RungE0(label(1)?),
        "F0" => Layer::RungF0(label(1)?),
        "ROT" => match arg(1)? {
            "+1" | "1" => Layer::Rot(1),
            "-1" => Layer::Rot(-1),
            other => return Err(err(line, format!("rotation must be +1 or -1, found `{}`", other))),
        },
        _ => unreachable!(),
    };
    if layer.is_annular() && h.kind == DiagramKind::Linear {
        return Err(err(line, format!("`{}` is only allowed in annular diagrams", toks[0])));
    }
    Ok(layer)
}

pub fn parse_diagram(text: &str) -> Result<LadderDiagram, ParseError> {
    let mut header = None;
    let mut source = None;
    let mut layers = Vec::new();
    let mut last = 0;
    for (ix, raw) in text.lines().enumerate() {
        let line = ix + 1;
        last = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match (&header, &source) {
            (None, _) => header = Some(parse_header(line, t)?),
            (Some(h), None) => source = Some(parse_source(line, t, h)?),
            (Some(h), Some(_)) => layers.push(parse_layer(line, t, h)?),
        }
    }
    let h = header.ok_or_else(|| err(last.max(1), "missing header line"))?;
    let src = source.ok_or_else(|| err(last.max(1), "missing source line"))?;
    let d = match h.kind {
        DiagramKind::Linear => LadderDiagram::new(h.n, src, layers),
        DiagramKind::Annular => LadderDiagram::annular(h.n, src, layers),
    };
    d.validate().map_err(|e| err(last.max(1), e.to_string()))?;
    Ok(d)
}

/// Notes about layers that send the diagram through the zero object. Such
/// diagrams are legal and evaluate to zero.
pub fn warnings(d: &LadderDiagram) -> Vec<String> {
    let objs = d.running_objects();
    if objs[0].is_zero() {
        return vec![format!("source {} is inadmissible, the diagram is zero", d.source)];
    }
    match objs.iter().position(Object::is_zero) {
        Some(ix) => vec![format!("layer {} leaves the admissible range, the diagram is zero", ix)],
        None => vec![],
    }
}

pub fn render_layer(l: &Layer) -> String {
    match *l {
        Layer::RungE(i, k) => format!("E {} {}", i, k),
        Layer::RungF(i, k) => format!("F {} {}", i, k),
        Layer::Crossing(i, Sign::Pos) => format!("X+ {}", i),
        Layer::Crossing(i, Sign::Neg) => format!("X- {}", i),
        Layer::Twist(i, h) => format!("TW {} {}", i, h),
        Layer::RungE0(k) => format!("E0 {}", k),
        Layer::RungF0(k) => format!("F0 {}", k),
        Layer::Rot(d) => format!("ROT {:+}", d),
    }
}

pub fn render(d: &LadderDiagram) -> String {
    let kind = match d.kind {
        DiagramKind::Linear => "linear",
        DiagramKind::Annular => "annular",
    };
    let mut out = format!("n={} m={} N={} kind={}\nsource =", d.n, d.m, d.total, kind);
    for a in &d.source.entries {
        write!(out, " {}", a).unwrap();
    }
    out.push('\n');
    for l in &d.layers {
        out.push_str(&render_layer(l));
        out.push('\n');
    }
    out
}
