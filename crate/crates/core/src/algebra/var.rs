use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A variable symbol.
///
/// Symbols compare in natural order, so `t2 < t10` and `x1 < x2 < y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Indexed symbol such as `t1` or `C2`.
    pub fn indexed(prefix: &str, index: usize) -> Self {
        Var::new(&format!("{prefix}{index}"))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

fn chunks(s: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..=bytes.len() {
        let boundary = i == bytes.len() || bytes[i].is_ascii_digit() != bytes[i - 1].is_ascii_digit();
        if boundary {
            out.push((bytes[start].is_ascii_digit(), &s[start..i]));
            start = i;
        }
    }
    out
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let ca = chunks(a);
    let cb = chunks(b);
    for ((da, sa), (db, sb)) in ca.iter().zip(cb.iter()) {
        let ord = match (da, db) {
            (true, true) => {
                let ta = sa.trim_start_matches('0');
                let tb = sb.trim_start_matches('0');
                ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb)).then_with(|| sa.len().cmp(&sb.len()))
            }
            _ => sa.cmp(sb),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len())
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        natural_cmp(&self.0, &other.0)
    }
}

/// Picks the first candidate name not in `taken`, falling back to `prefix0`, `prefix1`, ...
pub fn fresh_var<'a>(preferred: impl IntoIterator<Item = &'a str>, prefix: &str, taken: &dyn Fn(&Var) -> bool) -> Var {
    for name in preferred {
        let v = Var::new(name);
        if !taken(&v) {
            return v;
        }
    }
    (0..).map(|i| Var::indexed(prefix, i)).find(|v| !taken(v)).expect("unbounded search")
}
