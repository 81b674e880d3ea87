//! LP and MPS text output.
//!
//! Output is a pure function of the model: variables appear in id order and
//! constraints in model order. Coefficients print as exact decimals when
//! the rational terminates and with 17 significant digits otherwise.

use std::fmt::Write;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::models::{MilpModel, ObjectiveSense, Sense, VarKind};
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    LpText,
    Mps,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::LpText => "lp",
            ExportFormat::Mps => "mps",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lp" | "lp_text" => Ok(ExportFormat::LpText),
            "mps" => Ok(ExportFormat::Mps),
            _ => Err(Error::Input(format!("unknown export format {s:?}"))),
        }
    }
}

pub fn export(m: &MilpModel, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::LpText => write_lp(m),
        ExportFormat::Mps => write_mps(m),
    }
    .into_bytes()
}

/// Render a rational for a text model file.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = *r.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        let v = *r.numer() as f64 / *r.denom() as f64;
        return format!("{v:.16e}");
    }
    // scale to an integer over 10^digits
    let digits = twos.max(fives);
    let scale = 10i128.pow(digits) / *r.denom() as i128;
    let scaled = *r.numer() as i128 * scale;
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    let unit = 10u128.pow(digits);
    let frac = format!("{:0width$}", abs % unit, width = digits as usize);
    format!("{sign}{}.{}", abs / unit, frac.trim_end_matches('0'))
}

fn linear_expr(m: &MilpModel, terms: &[(usize, Rational)]) -> String {
    let mut out = String::new();
    for (k, (v, c)) in terms.iter().enumerate() {
        let name = &m.variables()[*v].name;
        let mag = c.abs();
        let coef = if mag.is_one() { String::new() } else { format!("{} ", format_rational(&mag)) };
        if k == 0 {
            let sign = if c.is_negative() { "- " } else { "" };
            let _ = write!(out, "{sign}{coef}{name}");
        } else {
            let sign = if c.is_negative() { '-' } else { '+' };
            let _ = write!(out, " {sign} {coef}{name}");
        }
    }
    out
}

fn write_lp(m: &MilpModel) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "\\ {}", m.name());
    let _ = writeln!(
        s,
        "{}",
        match m.sense() {
            ObjectiveSense::Minimize => "Minimize",
            ObjectiveSense::Maximize => "Maximize",
        }
    );
    let obj = if m.objective().is_empty() {
        m.variables().first().map_or(String::new(), |v| format!("0 {}", v.name))
    } else {
        linear_expr(m, m.objective())
    };
    let _ = writeln!(s, " obj: {obj}");
    let _ = writeln!(s, "Subject To");
    for c in m.constraints() {
        let expr = if c.terms.is_empty() {
            m.variables().first().map_or("0".to_string(), |v| format!("0 {}", v.name))
        } else {
            linear_expr(m, &c.terms)
        };
        let _ = writeln!(s, "{}: {} {} {}", c.name, expr, c.sense, format_rational(&c.rhs));
    }
    let _ = writeln!(s, "Bounds");
    for v in m.variables() {
        if v.kind == VarKind::Binary {
            continue;
        }
        match (&v.lower, &v.upper) {
            (l, None) if l.is_zero() => {}
            (l, None) => {
                let _ = writeln!(s, " {} >= {}", v.name, format_rational(l));
            }
            (l, Some(u)) => {
                let _ = writeln!(s, " {} <= {} <= {}", format_rational(l), v.name, format_rational(u));
            }
        }
    }
    let generals: Vec<&str> = m
        .variables()
        .iter()
        .filter(|v| v.kind == VarKind::Integer)
        .map(|v| v.name.as_str())
        .collect();
    if !generals.is_empty() {
        let _ = writeln!(s, "Generals");
        let _ = writeln!(s, " {}", generals.join(" "));
    }
    let binaries: Vec<&str> = m
        .variables()
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        let _ = writeln!(s, "Binaries");
        let _ = writeln!(s, " {}", binaries.join(" "));
    }
    let _ = writeln!(s, "End");
    s
}

/// Fixed-field record: fields start at columns 2, 5, 15, 25, 40 and 50.
fn mps_line(code: &str, name: &str, row1: &str, val1: &str) -> String {
    let mut line = format!(" {code:<2} {name:<8}  {row1:<8}  {val1}");
    while line.ends_with(' ') {
        line.pop();
    }
    line
}

fn marker_line(k: usize, kind: &str) -> String {
    format!("    {:<8}  {:<8}{:17}{}", format!("MARKER{k}"), "'MARKER'", "", kind)
}

fn write_mps(m: &MilpModel) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "NAME          {}", m.name());
    if m.sense() == ObjectiveSense::Maximize {
        let _ = writeln!(s, "OBJSENSE\n    MAX");
    }
    let _ = writeln!(s, "ROWS");
    let _ = writeln!(s, " N  obj");
    for c in m.constraints() {
        let code = match c.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        let _ = writeln!(s, " {code}  {}", c.name);
    }
    let _ = writeln!(s, "COLUMNS");
    // column-major view of the constraint matrix
    let mut cols: Vec<Vec<(&str, Rational)>> = vec![Vec::new(); m.num_vars()];
    for (v, c) in m.objective() {
        cols[*v].push(("obj", *c));
    }
    for con in m.constraints() {
        for (v, a) in &con.terms {
            cols[*v].push((con.name.as_str(), *a));
        }
    }
    let mut in_int = false;
    let mut marker = 0;
    for (v, var) in m.variables().iter().enumerate() {
        let discrete = var.kind.is_discrete();
        if discrete != in_int {
            let kind = if discrete { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(s, "{}", marker_line(marker, kind));
            marker += 1;
            in_int = discrete;
        }
        if cols[v].is_empty() {
            let _ = writeln!(s, "{}", mps_line("", &var.name, "obj", "0"));
        }
        for (row, a) in &cols[v] {
            let _ = writeln!(s, "{}", mps_line("", &var.name, row, &format_rational(a)));
        }
    }
    if in_int {
        let _ = writeln!(s, "{}", marker_line(marker, "'INTEND'"));
    }
    let _ = writeln!(s, "RHS");
    for c in m.constraints() {
        if !c.rhs.is_zero() {
            let _ = writeln!(s, "{}", mps_line("", "RHS", &c.name, &format_rational(&c.rhs)));
        }
    }
    let _ = writeln!(s, "BOUNDS");
    for var in m.variables() {
        if var.kind == VarKind::Binary {
            let _ = writeln!(s, "{}", mps_line("BV", "BND", &var.name, ""));
            continue;
        }
        if !var.lower.is_zero() {
            let _ = writeln!(s, "{}", mps_line("LO", "BND", &var.name, &format_rational(&var.lower)));
        }
        match &var.upper {
            Some(u) => {
                let _ = writeln!(s, "{}", mps_line("UP", "BND", &var.name, &format_rational(u)));
            }
            None if var.kind == VarKind::Integer => {
                let _ = writeln!(s, "{}", mps_line("PL", "BND", &var.name, ""));
            }
            None => {}
        }
    }
    let _ = writeln!(s, "ENDATA");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rendering() {
        assert_eq!(format_rational(&Rational::from_integer(-11)), "-11");
        assert_eq!(format_rational(&Rational::new(1, 4)), "0.25");
        assert_eq!(format_rational(&Rational::new(-3, 8)), "-0.375");
        assert_eq!(format_rational(&Rational::new(7, 20)), "0.35");
        assert_eq!(format_rational(&Rational::new(1, 3)), "3.3333333333333331e-1");
    }

    #[test]
    fn mps_fields_line_up() {
        let line = mps_line("UP", "BND", "y1", "2");
        assert_eq!(&line[1..3], "UP");
        assert_eq!(&line[4..7], "BND");
        assert_eq!(&line[14..16], "y1");
        assert_eq!(&line[24..25], "2");
        let mark = marker_line(0, "'INTORG'");
        assert_eq!(&mark[4..11], "MARKER0");
        assert_eq!(&mark[14..22], "'MARKER'");
        assert_eq!(&mark[39..], "'INTORG'");
    }
}
