//! Serde helpers: angles are radians in memory, degrees on disk.

/// Degrees for `rad`, preferring the shortest decimal among the values
/// within a few ulps that convert back to exactly `rad`.
pub fn to_degrees_exact(rad: f64) -> f64 {
    let d = rad.to_degrees();
    let mut best = d;
    let (mut lo, mut hi) = (d, d);
    for _ in 0..4 {
        lo = lo.next_down();
        hi = hi.next_up();
        for c in [lo, hi] {
            if c.to_radians() == rad && c.to_string().len() < best.to_string().len() {
                best = c;
            }
        }
    }
    best
}

pub mod degrees {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rad: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(super::to_degrees_exact(*rad))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d).map(f64::to_radians)
    }
}

pub mod degrees_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rad: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match rad {
            Some(r) => s.serialize_some(&super::to_degrees_exact(*r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<f64>::deserialize(d).map(|o| o.map(f64::to_radians))
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
