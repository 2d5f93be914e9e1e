//! Verdicts on whether every `j` measures in `R^d` can be bisected by a
//! `k`-element hyperplane arrangement, with certificates naming the
//! criterion that decided each case.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{invalid, Result};
use crate::gf2poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    In,
    NotIn,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::In => "IN",
            Status::NotIn => "NOT_IN",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Certificate {
    /// `k == 1` and `d >= j`.
    HamSandwich,
    /// `(t_1 + ... + t_k)^j` survives the truncation at `d0`.
    #[serde(rename = "THM1_IDEAL")]
    Thm1Ideal { d0: u64 },
    /// `j == d0 * k` with `d0 == 2^a`.
    #[serde(rename = "THM25_I")]
    Thm25I { d0: u64, a: u32 },
    /// `k` odd, `d0 == 2^a + ell`, `1 <= ell <= 2^a - 1`, `j == (d0 - ell) k + ell`.
    #[serde(rename = "THM25_II")]
    Thm25II { d0: u64, a: u32, ell: u64 },
    /// `d * k < j`: intervals on the moment curve cannot be bisected.
    MomentCurveNecessity,
    None,
}

impl Certificate {
    pub fn witness_d0(&self) -> Option<u64> {
        match *self {
            Certificate::Thm1Ideal { d0 }
            | Certificate::Thm25I { d0, .. }
            | Certificate::Thm25II { d0, .. } => Some(d0),
            _ => None,
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::HamSandwich => f.write_str("HAM_SANDWICH"),
            Certificate::Thm1Ideal { d0 } => write!(f, "THM1_IDEAL(d0={d0})"),
            Certificate::Thm25I { d0, a } => write!(f, "THM25_I(d0={d0}, a={a})"),
            Certificate::Thm25II { d0, a, ell } => {
                write!(f, "THM25_II(d0={d0}, a={a}, ell={ell})")
            }
            Certificate::MomentCurveNecessity => f.write_str("MOMENT_CURVE_NECESSITY"),
            Certificate::None => f.write_str("NONE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaVerdict {
    pub d: u64,
    pub j: u64,
    pub k: u64,
    pub status: Status,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_d0: Option<u64>,
}

impl fmt::Display for LambdaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} j={} k={} status={} certificate={}",
            self.d, self.j, self.k, self.status, self.certificate
        )
    }
}

fn check_positive(d: u64, j: u64, k: u64) -> Result<()> {
    if d == 0 || j == 0 || k == 0 {
        return Err(invalid(format!(
            "d, j, k must be positive, got ({d}, {j}, {k})"
        )));
    }
    Ok(())
}

/// Smallest `d0` at which `j == d0 * k` with `d0` a power of two.
pub fn thm25i_min_dimension(j: u64, k: u64) -> Option<Certificate> {
    if k < 2 || j % k != 0 {
        return None;
    }
    let d0 = j / k;
    d0.is_power_of_two().then(|| Certificate::Thm25I {
        d0,
        a: d0.trailing_zeros(),
    })
}

/// Smallest `d0 = 2^a + ell` with `k` odd and `j == 2^a k + ell`,
/// `a >= 1`, `1 <= ell <= 2^a - 1`.
pub fn thm25ii_min_dimension(j: u64, k: u64) -> Option<Certificate> {
    if k < 3 || k % 2 == 0 {
        return None;
    }
    let mut best: Option<Certificate> = None;
    for a in 1..63u32 {
        let Some(base) = (1u64 << a).checked_mul(k) else {
            break;
        };
        if base >= j {
            break;
        }
        let ell = j - base;
        if ell > (1u64 << a) - 1 {
            continue;
        }
        let d0 = (1u64 << a) + ell;
        if best.and_then(|c| c.witness_d0()).is_none_or(|b| d0 < b) {
            best = Some(Certificate::Thm25II { d0, a, ell });
        }
    }
    best
}

/// Smallest `d0 <= bound` at which the power of the variable sum leaves the ideal.
pub fn thm1_min_dimension(j: u64, k: u64, bound: u64) -> Option<Certificate> {
    if k < 2 {
        return None;
    }
    (1..=bound)
        .find(|&d0| !gf2poly::ideal_member(j, k, d0))
        .map(|d0| Certificate::Thm1Ideal { d0 })
}

/// Decides `(d, j, k)` against every implemented criterion.
///
/// Certificates are chosen in the fixed order ham sandwich, THM25_I,
/// THM25_II, THM1_IDEAL, each with the smallest witnessing dimension.
pub fn verdict(d: u64, j: u64, k: u64) -> Result<LambdaVerdict> {
    check_positive(d, j, k)?;
    let make = |status, certificate: Certificate| LambdaVerdict {
        d,
        j,
        k,
        status,
        certificate,
        witness_d0: certificate.witness_d0(),
    };
    if d.checked_mul(k).is_some_and(|dk| dk < j) {
        return Ok(make(Status::NotIn, Certificate::MomentCurveNecessity));
    }
    if k == 1 {
        // j <= d here, by necessity.
        return Ok(make(Status::In, Certificate::HamSandwich));
    }
    let within = |c: Option<Certificate>| c.filter(|c| c.witness_d0().is_some_and(|d0| d0 <= d));
    let found = within(thm25i_min_dimension(j, k))
        .or_else(|| within(thm25ii_min_dimension(j, k)))
        .or_else(|| thm1_min_dimension(j, k, d));
    Ok(match found {
        Some(c) => make(Status::In, c),
        None => make(Status::Unknown, Certificate::None),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierRow {
    pub j: u64,
    pub d_conjecture: u64,
    pub d_thm1: Option<u64>,
    pub d_thm25i: Option<u64>,
    pub d_thm25ii: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierTable {
    pub k: u64,
    pub search_bound_factor: u64,
    pub rows: Vec<FrontierRow>,
}

pub const DEFAULT_SEARCH_FACTOR: u64 = 4;

/// Per `j`, the conjectured minimal dimension `ceil(j/k)` and the smallest
/// dimension each criterion certifies, searching `d <= factor * j`.
pub fn frontier_table(k: u64, j_max: u64) -> Result<FrontierTable> {
    frontier_table_with_bound(k, j_max, DEFAULT_SEARCH_FACTOR)
}

pub fn frontier_table_with_bound(k: u64, j_max: u64, factor: u64) -> Result<FrontierTable> {
    if k < 2 {
        return Err(invalid(format!("k must be at least 2, got {k}")));
    }
    if j_max == 0 || factor == 0 {
        return Err(invalid("j_max and the search bound must be positive"));
    }
    let rows = (1..=j_max)
        .into_par_iter()
        .map(|j| {
            let bound = factor * j;
            let cap = |c: Option<Certificate>| {
                c.and_then(|c| c.witness_d0()).filter(|&d0| d0 <= bound)
            };
            FrontierRow {
                j,
                d_conjecture: j.div_ceil(k),
                d_thm1: cap(thm1_min_dimension(j, k, bound)),
                d_thm25i: cap(thm25i_min_dimension(j, k)),
                d_thm25ii: cap(thm25ii_min_dimension(j, k)),
            }
        })
        .collect();
    Ok(FrontierTable {
        k,
        search_bound_factor: factor,
        rows,
    })
}

impl FrontierTable {
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("j,d_conjecture,d_thm1,d_thm25i,d_thm25ii\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.j,
                r.d_conjecture,
                cell(r.d_thm1),
                cell(r.d_thm25i),
                cell(r.d_thm25ii)
            ));
        }
        out
    }

    /// Scatter of the frontier: `j` across, `d` up; conjecture as filled
    /// dots, each criterion as a ring of its own size and color.
    pub fn to_svg(&self) -> String {
        let width = 720.0;
        let height = 480.0;
        let margin = 50.0;
        let j_max = self.rows.len().max(1) as f64;
        let d_max = self
            .rows
            .iter()
            .flat_map(|r| [Some(r.d_conjecture), r.d_thm1, r.d_thm25i, r.d_thm25ii])
            .flatten()
            .max()
            .unwrap_or(1) as f64;
        let sx = |j: u64| margin + (j as f64) / j_max * (width - 2.0 * margin);
        let sy = |d: u64| height - margin - (d as f64) / d_max * (height - 2.0 * margin);

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
        ));
        svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        svg.push_str(&format!(
            "<line x1=\"{margin}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"black\"/>\n",
            y = height - margin,
            x2 = width - margin
        ));
        svg.push_str(&format!(
            "<line x1=\"{margin}\" y1=\"{margin}\" x2=\"{margin}\" y2=\"{y2}\" stroke=\"black\"/>\n",
            y2 = height - margin
        ));
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{y}\" font-size=\"14\" text-anchor=\"middle\">j</text>\n",
            x = width / 2.0,
            y = height - 12.0
        ));
        svg.push_str(&format!(
            "<text x=\"16\" y=\"{y}\" font-size=\"14\" text-anchor=\"middle\">d</text>\n",
            y = height / 2.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">k = {k}</text>\n",
            x = width / 2.0,
            k = self.k
        ));
        let tick_step = ((j_max / 10.0).ceil() as u64).max(1);
        for j in (tick_step..=self.rows.len() as u64).step_by(tick_step as usize) {
            svg.push_str(&format!(
                "<text x=\"{x:.1}\" y=\"{y}\" font-size=\"10\" text-anchor=\"middle\">{j}</text>\n",
                x = sx(j),
                y = height - margin + 14.0
            ));
        }
        let d_step = ((d_max / 8.0).ceil() as u64).max(1);
        for d in (d_step..=d_max as u64).step_by(d_step as usize) {
            svg.push_str(&format!(
                "<text x=\"{x}\" y=\"{y:.1}\" font-size=\"10\" text-anchor=\"end\">{d}</text>\n",
                x = margin - 6.0,
                y = sy(d) + 3.0
            ));
        }
        let series: [(&str, &str, f64, fn(&FrontierRow) -> Option<u64>); 3] = [
            ("thm1", "#c0392b", 7.0, |r| r.d_thm1),
            ("thm25i", "#2c3e50", 5.0, |r| r.d_thm25i),
            ("thm25ii", "#7f8c8d", 9.0, |r| r.d_thm25ii),
        ];
        for r in &self.rows {
            svg.push_str(&format!(
                "<circle class=\"conjecture\" cx=\"{:.1}\" cy=\"{:.1}\" r=\"2.5\" fill=\"black\"/>\n",
                sx(r.j),
                sy(r.d_conjecture)
            ));
            for (name, color, radius, get) in &series {
                if let Some(d) = get(r) {
                    svg.push_str(&format!(
                        "<circle class=\"{name}\" cx=\"{:.1}\" cy=\"{:.1}\" r=\"{radius}\" fill=\"none\" stroke=\"{color}\"/>\n",
                        sx(r.j),
                        sy(d)
                    ));
                }
            }
        }
        let legend = [
            ("conjecture ceil(j/k)", "black", true),
            ("ideal criterion", series[0].1, false),
            ("d0 k = j, d0 = 2^a", series[1].1, false),
            ("k odd, d0 = 2^a + ell", series[2].1, false),
        ];
        for (i, (label, color, filled)) in legend.iter().enumerate() {
            let y = margin + 16.0 * i as f64;
            let x = width - margin - 170.0;
            let fill = if *filled { color } else { &"none" };
            svg.push_str(&format!(
                "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"{fill}\" stroke=\"{color}\"/>\n"
            ));
            svg.push_str(&format!(
                "<text x=\"{tx}\" y=\"{ty}\" font-size=\"11\">{label}</text>\n",
                tx = x + 10.0,
                ty = y + 4.0
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}
