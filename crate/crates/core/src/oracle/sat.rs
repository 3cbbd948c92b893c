use std::fmt;

use super::{check_cap, OracleError};

/// A CNF formula with clauses of one to three literals. Literal `i` is the
/// variable `x_i` (1-based), `-i` its negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, OracleError> {
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 3 {
                return Err(OracleError::InvalidFormula(format!(
                    "clause {} has {} literals, expected 1 to 3",
                    j + 1,
                    c.len()
                )));
            }
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > vars) {
                return Err(OracleError::InvalidFormula(format!("literal {l} in clause {}", j + 1)));
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    /// Clauses padded to exactly three literals by repeating their own
    /// literals in order.
    pub fn padded(&self) -> Vec<[i32; 3]> {
        self.clauses.iter().map(|c| [c[0], c[1 % c.len()], c[2 % c.len()]]).collect()
    }

    /// `assignment[i]` is the value of `x_{i+1}`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.vars, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(f, "{l} ")?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// Reads `p cnf <vars> <clauses>` followed by 0-terminated clauses. Lines
/// starting with `c` are comments; a line `%` ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, OracleError> {
    let err = |line: usize, message: String| OracleError::Dimacs { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t == "%" {
            break;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(err(line, "second problem line".into()));
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| err(line, format!("bad problem line `{t}`")))?);
            continue;
        }
        if header.is_none() {
            return Err(err(line, "clause before the problem line".into()));
        }
        for tok in t.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| err(line, format!("bad literal `{tok}`")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| err(last.max(1), "missing problem line".into()))?;
    if !current.is_empty() {
        return Err(err(last, "last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(err(last.max(1), format!("header announces {count} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(vars, clauses)
}

/// Whether some assignment satisfies the formula, by trying all of them.
pub fn sat_bruteforce(f: &CnfFormula, cap: usize) -> Result<bool, OracleError> {
    check_cap("variables", f.vars, cap)?;
    let mut a = vec![false; f.vars];
    for mask in 0..1u64 << f.vars {
        for (i, x) in a.iter_mut().enumerate() {
            *x = mask >> i & 1 == 1;
        }
        if f.satisfied_by(&a) {
            return Ok(true);
        }
    }
    Ok(false)
}
