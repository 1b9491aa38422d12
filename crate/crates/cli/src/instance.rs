//! Instance file format: rationals as "p/q" strings, complexes as
//! {"re", "im"} decimal strings.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};

use gcl_core::cones::GaussianRational;
use gcl_core::forms::FormFamily;
use gcl_core::fuzz::Fuzzer;
use gcl_core::rat::{format_rat, parse_rat, Int, Rat};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexStr {
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_smooth: Option<i64>,
    pub forms: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<ComplexStr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<ComplexStr>>,
    /// Exact Gaussian-rational x for sign tables: re/im as "p/q" strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_exact: Option<Vec<ComplexStr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl InstanceFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let inst: InstanceFile = serde_json::from_str(&text)?;
        Ok(inst)
    }

    pub fn family(&self) -> Result<FormFamily> {
        let forms = self
            .forms
            .iter()
            .map(|f| f.iter().map(|&e| Int::from(e)).collect())
            .collect();
        FormFamily::new(self.n, forms).map_err(|e| anyhow!("{e}"))
    }

    pub fn v_vector(&self) -> Result<Vec<Rat>> {
        match &self.v {
            None => Ok(vec![Rat::default(); self.n]),
            Some(vs) => vs
                .iter()
                .map(|s| parse_rat(s).ok_or_else(|| anyhow!("bad rational {s:?} in v")))
                .collect(),
        }
    }

    pub fn n_smooth(&self) -> Result<i64> {
        self.n_smooth
            .ok_or_else(|| anyhow!("this command needs the smoothing level \"N\" in the instance"))
    }

    /// The exact Gaussian-rational x for sign tables: from the file if
    /// present, else sampled (seeded) until the table builder accepts it.
    pub fn gaussian_x(&self, seed: u64) -> Result<Vec<GaussianRational>> {
        if let Some(xs) = &self.x_exact {
            return xs
                .iter()
                .map(|z| {
                    let re = parse_rat(&z.re).ok_or_else(|| anyhow!("bad rational {:?}", z.re))?;
                    let im = parse_rat(&z.im).ok_or_else(|| anyhow!("bad rational {:?}", z.im))?;
                    Ok(GaussianRational::new(re, im))
                })
                .collect();
        }
        let fam = self.family()?;
        let mut fz = Fuzzer::new(self.seed.unwrap_or(seed));
        for _ in 0..500 {
            let x = fz.gaussian_x(self.n);
            if gcl_core::cones::build_sign_table(&fam, &x).is_ok() {
                return Ok(x);
            }
        }
        Err(anyhow!("no admissible exact x found for the sign table"))
    }

    pub fn from_family(
        fam: &FormFamily,
        v: Option<&[Rat]>,
        n_smooth: Option<i64>,
        seed: u64,
    ) -> InstanceFile {
        InstanceFile {
            n: fam.n(),
            n_smooth,
            forms: fam
                .forms()
                .iter()
                .map(|f| {
                    f.iter()
                        .map(|e| i64::try_from(e).expect("fuzzed entries are small"))
                        .collect()
                })
                .collect(),
            v: v.map(|vs| vs.iter().map(format_rat).collect()),
            w: None,
            x: None,
            x_exact: None,
            seed: Some(seed),
            tolerance: None,
        }
    }
}
