use std::fmt::Write;

use clap::ValueEnum;
use num_rational::BigRational;
use num_traits::One;
use pend_nf_core::normal_form::{
    build_a2_series, build_calu_series, build_d_series, build_g0_series, build_stable_series, build_u_series,
};
use pend_nf_core::RationalSeries;

use crate::number::Exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesName {
    #[value(name = "g0")]
    G0,
    #[value(name = "U")]
    U,
    #[value(name = "D")]
    D,
    #[value(name = "a2")]
    A2,
    #[value(name = "calU")]
    CalU,
    #[value(name = "W")]
    W,
    #[value(name = "Us")]
    Us,
}

impl SeriesName {
    pub fn name(self) -> &'static str {
        match self {
            SeriesName::G0 => "g0",
            SeriesName::U => "U",
            SeriesName::D => "D",
            SeriesName::A2 => "a2",
            SeriesName::CalU => "calU",
            SeriesName::W => "W",
            SeriesName::Us => "Us",
        }
    }

    pub fn build(self, order: usize) -> RationalSeries {
        let s = match self {
            SeriesName::G0 => build_g0_series(order),
            SeriesName::U => build_u_series(order),
            SeriesName::D => build_d_series(order),
            SeriesName::A2 => build_a2_series(order),
            SeriesName::CalU => build_calu_series(order),
            SeriesName::W => build_stable_series(order).w_series,
            SeriesName::Us => build_stable_series(order).us_series,
        };
        s.truncate(order)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Normalization {
    Normalized,
    Physical { inertia: Exact, g: Exact },
}

impl Normalization {
    pub fn describe(&self) -> String {
        match self {
            Normalization::Normalized => "normalized (g = 1, 32 I g = 1)".into(),
            Normalization::Physical { inertia, g } => {
                format!("physical (I = {}, g = {})", inertia.rational, g.rational)
            }
        }
    }

    /// Coefficient `k` becomes `c_k · A / Bᵏ`.
    fn factors(&self, series: SeriesName) -> (BigRational, BigRational) {
        let Normalization::Physical { inertia, g } = self else {
            return (BigRational::one(), BigRational::one());
        };
        let (i, g) = (&inertia.rational, &g.rational);
        let n32 = BigRational::from_integer(32.into());
        let action = &n32 * i * g;
        let energy = &action * g;
        let one = BigRational::one();
        match series {
            SeriesName::G0 => (g.clone(), one),
            SeriesName::U | SeriesName::Us => (energy, one),
            SeriesName::D | SeriesName::A2 => (action, one),
            SeriesName::CalU => (energy, action),
            SeriesName::W => (energy, BigRational::from_integer(2.into()) * action),
        }
    }

    pub fn apply(&self, series: SeriesName, s: &RationalSeries) -> RationalSeries {
        let (a, b) = self.factors(series);
        let mut out = s.clone();
        let mut div = BigRational::one();
        for k in 0..=s.order() {
            out.set_coeff(k, s.coeffs()[k].clone() * &a / &div);
            div *= &b;
        }
        if series == SeriesName::W && matches!(self, Normalization::Physical { .. }) {
            // physical W is the stable energy as a function of the action
            return out.with_var("x");
        }
        out
    }
}

/// `{var, order, coeffs: [[num, den], …]}` plus the series name and
/// normalization, one coefficient pair per line.
pub fn render_json(name: SeriesName, s: &RationalSeries, norm: &Normalization) -> String {
    let js = |v: &str| serde_json::to_string(v).expect("strings serialize");
    let mut out = String::from("{\n");
    writeln!(out, "  \"var\": {},", js(s.var())).expect("writing to a String");
    writeln!(out, "  \"order\": {},", s.order()).expect("writing to a String");
    writeln!(out, "  \"series\": {},", js(name.name())).expect("writing to a String");
    writeln!(out, "  \"normalization\": {},", js(&norm.describe())).expect("writing to a String");
    out.push_str("  \"coeffs\": [\n");
    let pairs = s.coeff_strings();
    for (k, (n, d)) in pairs.iter().enumerate() {
        let sep = if k + 1 < pairs.len() { "," } else { "" };
        writeln!(out, "    [{}, {}]{sep}", js(n), js(d)).expect("writing to a String");
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn render_csv(name: SeriesName, s: &RationalSeries, norm: &Normalization) -> String {
    let mut out = format!("# {} in {}; {}\npower,num,den\n", name.name(), s.var(), norm.describe());
    for (k, (n, d)) in s.coeff_strings().into_iter().enumerate() {
        writeln!(out, "{k},{n},{d}").expect("writing to a String");
    }
    out
}

pub fn render_text(name: SeriesName, s: &RationalSeries, norm: &Normalization) -> String {
    format!("# {}; {}\n{} = {}\n", name.name(), norm.describe(), name.name(), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn physical(i: &str, g: &str) -> Normalization {
        Normalization::Physical { inertia: i.parse().unwrap(), g: g.parse().unwrap() }
    }

    #[test]
    fn physical_leading_terms() {
        let norm = physical("0.5", "3");
        let q = |n: i64| BigRational::from_integer(n.into());
        // 32 I g = 48, 32 I g² = 144
        let d = norm.apply(SeriesName::D, &SeriesName::D.build(2));
        assert_eq!(d.coeffs()[0], q(48));
        let u = norm.apply(SeriesName::U, &SeriesName::U.build(2));
        assert_eq!(u.coeffs()[1], q(144));
        let calu = norm.apply(SeriesName::CalU, &SeriesName::CalU.build(3));
        assert_eq!(calu.coeffs()[1], q(3));
        assert_eq!(calu.coeffs()[2], BigRational::new(288.into(), 2304.into()));
    }

    #[test]
    fn normalized_is_identity() {
        let s = SeriesName::W.build(5);
        assert_eq!(Normalization::Normalized.apply(SeriesName::W, &s), s);
    }

    #[test]
    fn json_parses_back() {
        let s = SeriesName::CalU.build(4);
        let v: serde_json::Value = serde_json::from_str(&render_json(SeriesName::CalU, &s, &Normalization::Normalized)).unwrap();
        assert_eq!(v["var"], "x");
        assert_eq!(v["order"], 4);
        assert_eq!(v["coeffs"][3], serde_json::json!(["-4", "1"]));
    }

    #[test]
    fn csv_layout() {
        let s = SeriesName::G0.build(2);
        let csv = render_csv(SeriesName::G0, &s, &Normalization::Normalized);
        assert_eq!(csv, "# g0 in x'; normalized (g = 1, 32 I g = 1)\npower,num,den\n0,1,1\n1,4,1\n2,12,1\n");
    }
}
