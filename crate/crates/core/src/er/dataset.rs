use crate::error::{domain, Error, Result};
use crate::esc::MuFamily;
use crate::partition::SetPartition;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, weighted::WeightedIndex};
use std::io::{Read, Write};

/// `n` records with `L` categorical fields. Category ids are 0-based in memory
/// and 1-based in CSV files.
#[derive(Debug, Clone, PartialEq)]
pub struct ErDataset {
    x: Vec<Vec<u32>>,
    d: Vec<usize>,
    /// Empirical category frequencies per field; the sampler treats them as fixed.
    theta: Vec<Vec<f64>>,
    field_names: Vec<String>,
    truth: Option<SetPartition>,
}

impl ErDataset {
    pub fn new(x: Vec<Vec<u32>>, d: Vec<usize>, truth: Option<SetPartition>) -> Result<Self> {
        let n = x.len();
        if n == 0 {
            return domain("dataset has no records");
        }
        let l = d.len();
        if l == 0 {
            return domain("dataset has no fields");
        }
        for (i, row) in x.iter().enumerate() {
            if row.len() != l {
                return domain(format!("record {i} has {} fields, expected {l}", row.len()));
            }
            for (f, &v) in row.iter().enumerate() {
                if v as usize >= d[f] {
                    return domain(format!("record {i} field {f}: category {} exceeds D = {}", v + 1, d[f]));
                }
            }
        }
        if let Some(t) = &truth {
            if t.n() != n {
                return domain(format!("truth has {} labels for {n} records", t.n()));
            }
        }
        let theta = (0..l)
            .map(|f| {
                let mut counts = vec![0.0; d[f]];
                for row in &x {
                    counts[row[f] as usize] += 1.0;
                }
                counts.iter().map(|c| c / n as f64).collect()
            })
            .collect();
        let field_names = (1..=l).map(|f| format!("field_{f}")).collect();
        Ok(Self {
            x,
            d,
            theta,
            field_names,
            truth,
        })
    }

    pub fn with_field_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.d.len() {
            return domain("one name per field required");
        }
        self.field_names = names;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn n_fields(&self) -> usize {
        self.d.len()
    }

    pub fn categories(&self) -> &[usize] {
        &self.d
    }

    pub fn record(&self, i: usize) -> &[u32] {
        &self.x[i]
    }

    pub fn records(&self) -> &[Vec<u32>] {
        &self.x
    }

    pub fn theta(&self) -> &[Vec<f64>] {
        &self.theta
    }

    pub fn field_names(&self) -> &[String] {
        &self.field_names
    }

    pub fn truth(&self) -> Option<&SetPartition> {
        self.truth.as_ref()
    }

    /// Writes a header row, one column per field plus `truth` when known.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let mut header: Vec<String> = self.field_names.clone();
        if self.truth.is_some() {
            header.push("truth".into());
        }
        wtr.write_record(&header).map_err(io_err)?;
        for (i, row) in self.x.iter().enumerate() {
            let mut rec: Vec<String> = row.iter().map(|v| (v + 1).to_string()).collect();
            if let Some(t) = &self.truth {
                rec.push((t.labels()[i] + 1).to_string());
            }
            wtr.write_record(&rec).map_err(io_err)?;
        }
        wtr.flush().map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a CSV with a header. A column named `truth` holds entity labels.
    /// A field whose values are all positive integers uses them as category ids
    /// with `D` equal to the largest; other fields map their sorted distinct
    /// strings to ids.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let header: Vec<String> = rdr.headers().map_err(io_err)?.iter().map(str::to_string).collect();
        let truth_col = header.iter().position(|h| h == "truth");
        let mut columns: Vec<Vec<String>> = vec![Vec::new(); header.len()];
        for rec in rdr.records() {
            let rec = rec.map_err(io_err)?;
            if rec.len() != header.len() {
                return Err(Error::Config(format!("row with {} columns, header has {}", rec.len(), header.len())));
            }
            for (c, v) in rec.iter().enumerate() {
                columns[c].push(v.trim().to_string());
            }
        }
        let n = columns.first().map_or(0, Vec::len);
        let mut x = vec![Vec::new(); n];
        let mut d = Vec::new();
        let mut names = Vec::new();
        for (c, col) in columns.iter().enumerate() {
            if Some(c) == truth_col {
                continue;
            }
            let ints: Option<Vec<u32>> = col.iter().map(|v| v.parse::<u32>().ok().filter(|&u| u >= 1)).collect();
            let (ids, dl) = match ints {
                Some(v) => {
                    let dl = v.iter().copied().max().unwrap_or(1) as usize;
                    (v.into_iter().map(|u| u - 1).collect::<Vec<_>>(), dl)
                }
                None => {
                    let mut levels: Vec<&String> = col.iter().collect();
                    levels.sort();
                    levels.dedup();
                    let ids = col
                        .iter()
                        .map(|v| levels.binary_search(&v).expect("level present") as u32)
                        .collect();
                    (ids, levels.len())
                }
            };
            for (row, id) in x.iter_mut().zip(ids) {
                row.push(id);
            }
            d.push(dl);
            names.push(header[c].clone());
        }
        let truth = match truth_col {
            Some(c) => {
                let labels: Vec<&str> = columns[c].iter().map(String::as_str).collect();
                Some(SetPartition::from_labels(&labels))
            }
            None => None,
        };
        Self::new(x, d, truth)?.with_field_names(names)
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Config(format!("CSV: {e}"))
}

/// True cluster-size counts `m_s` (index `s - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub counts: Vec<usize>,
}

impl Scenario {
    pub fn from_counts(counts: Vec<usize>) -> Result<Self> {
        if counts.iter().all(|&c| c == 0) {
            return domain("scenario has no clusters");
        }
        Ok(Self { counts })
    }

    /// `m_s = round(scale · μ_s)`.
    pub fn from_mu(mu: &MuFamily, scale: f64) -> Result<Self> {
        mu.validate()?;
        let top = mu.support_max().unwrap_or(10_000);
        let mut counts: Vec<usize> = (1..=top).map(|s| (scale * mu.pmf(s)).round() as usize).collect();
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self::from_counts(counts)
    }

    /// The three simulation scenarios: Binomial⁺(10, 0.5), Poisson⁺(5), NegBin⁺(5, 0.5).
    pub fn preset(index: usize) -> Result<Self> {
        let mu = match index {
            1 => MuFamily::ZtBinomial { trials: 10, p: 0.5 },
            2 => MuFamily::ZtPoisson { lambda: 5.0 },
            3 => MuFamily::ZtNegBinomial { r: 5.0, p: 0.5 },
            _ => return domain(format!("no scenario {index}; choose 1, 2 or 3")),
        };
        Self::from_mu(&mu, 100.0)
    }

    pub fn n_clusters(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn n_records(&self) -> usize {
        self.counts.iter().enumerate().map(|(i, c)| (i + 1) * c).sum()
    }
}

/// Draws entities `y_k ~ Π Categorical(θ_ℓ)` and records that copy their entity
/// field by field, except with probability `β_ℓ` where a fresh `Categorical(θ_ℓ)`
/// draw replaces the entry. Record order is shuffled.
pub fn generate_synthetic(
    scenario: &Scenario,
    theta: &[Vec<f64>],
    beta: &[f64],
    seed: u64,
) -> Result<ErDataset> {
    if theta.len() != beta.len() || theta.is_empty() {
        return domain("need one θ and one β per field");
    }
    if beta.iter().any(|b| !(0.0..=1.0).contains(b)) {
        return domain("β must lie in [0, 1]");
    }
    for t in theta {
        if t.iter().any(|v| !(*v >= 0.0)) || (t.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return domain("each θ_ℓ must be a probability vector");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dists: Vec<WeightedIndex<f64>> = theta
        .iter()
        .map(|t| WeightedIndex::new(t).map_err(|e| Error::Domain(e.to_string())))
        .collect::<Result<_>>()?;
    let mut rows: Vec<(usize, Vec<u32>)> = Vec::with_capacity(scenario.n_records());
    let mut entity = 0;
    for (s_minus_1, &m) in scenario.counts.iter().enumerate() {
        for _ in 0..m {
            let y: Vec<u32> = dists.iter().map(|dist| dist.sample(&mut rng) as u32).collect();
            for _ in 0..=s_minus_1 {
                let x = y
                    .iter()
                    .zip(beta)
                    .zip(&dists)
                    .map(|((&yv, &b), dist)| if rng.random::<f64>() < b { dist.sample(&mut rng) as u32 } else { yv })
                    .collect();
                rows.push((entity, x));
            }
            entity += 1;
        }
    }
    rows.shuffle(&mut rng);
    let labels: Vec<usize> = rows.iter().map(|r| r.0).collect();
    let x = rows.into_iter().map(|r| r.1).collect();
    let d = theta.iter().map(Vec::len).collect();
    ErDataset::new(x, d, Some(SetPartition::from_labels(&labels)))
}

/// Uniform `θ_ℓ` over `categories` values for each of `fields` fields.
pub fn uniform_theta(fields: usize, categories: usize) -> Vec<Vec<f64>> {
    vec![vec![1.0 / categories as f64; categories]; fields]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_five_scenarios() {
        let s1 = Scenario::preset(1).unwrap();
        assert_eq!(s1.counts, vec![1, 4, 12, 21, 25, 21, 12, 4, 1]);
        assert_eq!(s1.n_clusters(), 101);
        let s2 = Scenario::preset(2).unwrap();
        assert_eq!(s2.counts, vec![3, 8, 14, 18, 18, 15, 11, 7, 4, 2, 1]);
        assert_eq!(s2.n_clusters(), 101);
        let s3 = Scenario::preset(3).unwrap();
        assert_eq!(s3.counts, vec![8, 12, 14, 14, 13, 11, 8, 6, 5, 3, 2, 1, 1, 1]);
        assert_eq!(s3.n_clusters(), 99);
        assert!(Scenario::from_counts(vec![0, 0]).is_err());
    }

    #[test]
    fn no_distortion_copies_entities() {
        let sc = Scenario::from_counts(vec![2, 3, 1]).unwrap();
        let data = generate_synthetic(&sc, &uniform_theta(4, 10), &[0.0; 4], 3).unwrap();
        let truth = data.truth().unwrap();
        for block in truth.blocks() {
            for &i in &block {
                assert_eq!(data.record(i), data.record(block[0]));
            }
        }
        assert_eq!(data.n(), 2 + 6 + 3);
        assert_eq!(truth.shape().parts(), &[3, 2, 2, 2, 1, 1]);
    }

    #[test]
    fn deterministic_and_round_trips() {
        let sc = Scenario::preset(1).unwrap();
        let a = generate_synthetic(&sc, &uniform_theta(5, 10), &[0.05; 5], 7).unwrap();
        let b = generate_synthetic(&sc, &uniform_theta(5, 10), &[0.05; 5], 7).unwrap();
        assert_eq!(a, b);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let back = ErDataset::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.records(), a.records());
        assert_eq!(back.truth(), a.truth());
        // D is read back as the largest id seen, so θ agrees up to trailing zeros
        for (t1, t2) in back.theta().iter().zip(a.theta()) {
            assert_eq!(t1[..], t2[..t1.len()]);
            assert!(t2[t1.len()..].iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn string_fields_are_mapped() {
        let csv = "sex,state\nF,CA\nM,NY\nF,NY\n";
        let data = ErDataset::read_csv(csv.as_bytes()).unwrap();
        assert_eq!(data.categories(), &[2, 2]);
        assert_eq!(data.record(1), &[1, 1]);
        assert!(data.truth().is_none());
        let t = &data.theta()[0];
        assert!((t[0] - 2.0 / 3.0).abs() < 1e-15);
    }
}
