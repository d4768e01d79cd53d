//! Line-oriented instance file format.
//!
//! ```text
//! q 2
//! n 4
//! m 4
//! wants 1 2 3 4
//! side 1 : 2
//! side 2 : 3
//! side 3 : 1
//! side 4 : 2
//! sender 1 : 1 4
//! sender 2 : 2 3 4
//! ```
//!
//! followed optionally by `coverage 1 : ..`, `coverage 2 : ..` and
//! `coverage c : ..`. Indices are 1-based. Blank lines and `#` comments are
//! ignored.

use std::fmt::Write;

use super::{CoverageProfile, Instance};
use crate::error::{Error, Result};
use crate::msgset::{MsgSet, MAX_INDEX};

struct Lines<'a> {
    inner: Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a>,
    peeked: Option<(usize, Vec<&'a str>)>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text.lines().enumerate().filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            (!toks.is_empty()).then_some((i + 1, toks))
        });
        Lines {
            inner: Box::new(inner),
            peeked: None,
            last_line: 0,
        }
    }

    fn peek(&mut self) -> Option<&(usize, Vec<&'a str>)> {
        if self.peeked.is_none() {
            self.peeked = self.inner.next();
        }
        self.peeked.as_ref()
    }

    fn next_expect(&mut self, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        self.peek();
        match self.peeked.take() {
            Some((line, toks)) => {
                self.last_line = line;
                if toks[0] != keyword {
                    return Err(Error::parse(line, format!("expected `{keyword}`, found `{}`", toks[0])));
                }
                Ok((line, toks))
            }
            None => Err(Error::parse(self.last_line + 1, format!("unexpected end of file, expected `{keyword}`"))),
        }
    }
}

fn parse_uint(line: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("`{tok}` is not a non-negative integer")))
}

fn scalar(lines: &mut Lines<'_>, keyword: &str) -> Result<(usize, usize)> {
    let (line, toks) = lines.next_expect(keyword)?;
    if toks.len() != 2 {
        return Err(Error::parse(line, format!("`{keyword}` takes exactly one value")));
    }
    Ok((line, parse_uint(line, toks[1])?))
}

/// Parses `<keyword> <label> : <indices>` into (label, 0-based set).
fn labeled_set(lines: &mut Lines<'_>, keyword: &str, bound: usize) -> Result<(usize, String, MsgSet)> {
    let (line, toks) = lines.next_expect(keyword)?;
    if toks.len() < 3 || toks[2] != ":" {
        return Err(Error::parse(line, format!("expected `{keyword} <label> : <indices>`")));
    }
    let mut set = MsgSet::EMPTY;
    for tok in &toks[3..] {
        let v = parse_uint(line, tok)?;
        if v == 0 || v > bound {
            return Err(Error::parse(line, format!("index {v} out of range 1..={bound}")));
        }
        if set.contains(v - 1) {
            return Err(Error::parse(line, format!("index {v} listed twice")));
        }
        set.insert(v - 1);
    }
    Ok((line, toks[1].to_string(), set))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let (qline, q) = scalar(&mut lines, "q")?;
    let q = u32::try_from(q).map_err(|_| Error::parse(qline, "field size too large"))?;
    if q > crate::linalg::MAX_MODULUS {
        return Err(Error::parse(qline, format!("field size {q} exceeds the supported maximum {}", crate::linalg::MAX_MODULUS)));
    }
    if !crate::linalg::is_prime(q) {
        return Err(Error::parse(qline, format!("field size {q} is not prime")));
    }
    let (nline, n) = scalar(&mut lines, "n")?;
    if n == 0 || n > MAX_INDEX {
        return Err(Error::parse(nline, format!("n must be in 1..={MAX_INDEX}")));
    }
    let (mline, m) = scalar(&mut lines, "m")?;
    if m == 0 || m > MAX_INDEX {
        return Err(Error::parse(mline, format!("m must be in 1..={MAX_INDEX}")));
    }

    let (wline, wtoks) = lines.next_expect("wants")?;
    if wtoks.len() != m + 1 {
        return Err(Error::parse(wline, format!("`wants` needs {m} values, got {}", wtoks.len() - 1)));
    }
    let mut wants = Vec::with_capacity(m);
    for tok in &wtoks[1..] {
        let v = parse_uint(wline, tok)?;
        if v == 0 || v > n {
            return Err(Error::parse(wline, format!("wanted message {v} out of range 1..={n}")));
        }
        wants.push(v - 1);
    }

    let mut side_info = Vec::with_capacity(m);
    for (k, &want) in wants.iter().enumerate() {
        let (line, label, set) = labeled_set(&mut lines, "side", n)?;
        if label != (k + 1).to_string() {
            return Err(Error::parse(line, format!("expected `side {}`, found `side {label}`", k + 1)));
        }
        if set.contains(want) {
            return Err(Error::parse(
                line,
                format!("receiver {} has its wanted message x{} as side information", k + 1, want + 1),
            ));
        }
        side_info.push(set);
    }

    let mut senders = Vec::new();
    while matches!(lines.peek(), Some((_, t)) if t[0] == "sender") {
        let (line, label, set) = labeled_set(&mut lines, "sender", n)?;
        if label != (senders.len() + 1).to_string() {
            return Err(Error::parse(
                line,
                format!("expected `sender {}`, found `sender {label}`", senders.len() + 1),
            ));
        }
        senders.push(set);
    }
    if senders.is_empty() {
        let fallback = lines.last_line + 1;
        let line = lines.peek().map_or(fallback, |(l, _)| *l);
        return Err(Error::parse(line, "expected at least one `sender` line"));
    }

    let coverage = if lines.peek().is_some() {
        let mut parts = [MsgSet::EMPTY; 3];
        for (slot, label) in ["1", "2", "c"].iter().enumerate() {
            let (line, got, set) = labeled_set(&mut lines, "coverage", m)?;
            if got != *label {
                return Err(Error::parse(line, format!("expected `coverage {label}`, found `coverage {got}`")));
            }
            parts[slot] = set;
        }
        Some(CoverageProfile::new(parts[0], parts[1], parts[2]))
    } else {
        None
    };
    if let Some((line, toks)) = lines.peek() {
        return Err(Error::parse(*line, format!("unexpected `{}` after the instance", toks[0])));
    }

    Instance::new(q, n, wants, side_info, senders, coverage).map_err(|e| match e {
        Error::Invalid(msg) => Error::parse(lines.last_line, msg),
        other => other,
    })
}

fn one_based(s: MsgSet) -> String {
    s.iter().map(|i| format!(" {}", i + 1)).collect()
}

pub fn render_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "q {}", inst.q());
    let _ = writeln!(out, "n {}", inst.n());
    let _ = writeln!(out, "m {}", inst.m());
    let wants: String = inst.wants_all().iter().map(|f| format!(" {}", f + 1)).collect();
    let _ = writeln!(out, "wants{wants}");
    for k in 0..inst.m() {
        let _ = writeln!(out, "side {} :{}", k + 1, one_based(inst.side_info(k)));
    }
    for (j, &s) in inst.senders().iter().enumerate() {
        let _ = writeln!(out, "sender {} :{}", j + 1, one_based(s));
    }
    if let Some(c) = inst.coverage() {
        let _ = writeln!(out, "coverage 1 :{}", one_based(c.r1));
        let _ = writeln!(out, "coverage 2 :{}", one_based(c.r2));
        let _ = writeln!(out, "coverage c :{}", one_based(c.rc));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(v: &[usize]) -> MsgSet {
        v.iter().map(|&i| i - 1).collect()
    }

    #[test]
    fn parses_instance_a() {
        let a = fixtures::instance_a();
        assert_eq!((a.n(), a.m(), a.q()), (5, 5, 2));
        assert_eq!(a.senders(), &[set(&[1, 2, 3]), set(&[3, 4, 5])]);
        let expected = [set(&[2, 5]), set(&[1, 5]), set(&[2, 4]), set(&[2, 3]), set(&[1, 3, 4])];
        assert_eq!(a.side_info_all(), &expected);
        assert!(a.coverage().is_none());
    }

    #[test]
    fn parses_instance_b() {
        let b = fixtures::instance_b();
        assert_eq!((b.n(), b.m()), (4, 4));
        assert_eq!(b.senders(), &[set(&[1, 4]), set(&[2, 3, 4])]);
        assert_eq!(b.side_info_all(), &[set(&[2]), set(&[3]), set(&[1]), set(&[2])]);
    }

    #[test]
    fn parses_coverage() {
        let c = fixtures::instance_c();
        let cov = c.coverage().unwrap();
        assert_eq!((cov.r1, cov.r2, cov.rc), (set(&[1]), set(&[3]), set(&[2])));
        assert_eq!(c.side_info_all(), &[set(&[2, 3]), set(&[]), set(&[1])]);
    }

    #[test]
    fn wanted_message_in_side_info_is_a_line_error() {
        let text = "q 2\nn 2\nm 2\nwants 1 2\nside 1 : 1\nside 2 :\nsender 1 : 1 2\n";
        match parse_instance(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_and_range_errors() {
        let bad = [
            ("q 4\nn 1\nm 1\nwants 1\nside 1 :\nsender 1 : 1\n", 1),
            ("q 2\nn 2\nm 1\nwants 3\nside 1 :\nsender 1 : 1 2\n", 4),
            ("q 2\nn 2\nm 1\nwants 1\nside 1 : 7\nsender 1 : 1 2\n", 5),
            ("q 2\nn 2\nm 1\nwants 1\nside 2 :\nsender 1 : 1 2\n", 5),
            ("q 2\nn 2\nm 1\nwants 1\nside 1 2\nsender 1 : 1 2\n", 5),
            ("q 2\nn 2\nm 1\nwants 1\nside 1 :\n", 6),
            ("q 2\nn 2\nm 1\nwants 1\nside 1 :\nsender 1 : 1\n", 6),
            ("q 2\nn 2\nm 1\nwants 1\nside 1 :\nsender 1 : 1 2\nbogus 1\n", 7),
            ("n 2\n", 1),
        ];
        for (text, want_line) in bad {
            match parse_instance(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want_line, "{text}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\nq 3\n\nn 1\nm 1 # one receiver\nwants 1\nside 1 :\nsender 1 : 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.q(), 3);
    }

    mod props {
        use super::*;
        use crate::sweep::random_instance;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #[test]
            fn render_parse_roundtrip(seed in any::<u64>(), n in 1usize..7, s in 1usize..4, cellular in any::<bool>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let inst = random_instance(&mut rng, n, s, if cellular { 2 } else { 3 }, cellular);
                let back = parse_instance(&render_instance(&inst)).unwrap();
                prop_assert_eq!(back, inst);
            }
        }
    }
}
