//! Seeded synthetic networks. All randomness comes from a ChaCha stream
//! seeded with the caller's seed, so outputs are reproducible across runs
//! and platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

use crate::error::{Error, Result};
use crate::graph::{balance_vector, Amount, KindSet, NodeId, Obligation, ObligationGraph};

/// Distribution of obligation amounts, in minor units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AmountDist {
    /// Inclusive uniform range.
    Uniform { min: Amount, max: Amount },
    /// Log-normal with the given median and log-space spread.
    LogNormal { median: Amount, sigma: f64 },
}

impl Default for AmountDist {
    fn default() -> Self {
        AmountDist::LogNormal {
            median: 546_400,
            sigma: 1.0,
        }
    }
}

impl AmountDist {
    fn check(&self) -> Result<()> {
        match *self {
            AmountDist::Uniform { min, max } if min >= 1 && max >= min => Ok(()),
            AmountDist::LogNormal { median, sigma }
                if median >= 1 && sigma.is_finite() && sigma >= 0.0 =>
            {
                Ok(())
            }
            other => Err(Error::InvalidParameter(format!(
                "bad amount distribution {other:?}"
            ))),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Amount {
        match *self {
            AmountDist::Uniform { min, max } => rng.gen_range(min..=max),
            AmountDist::LogNormal { median, sigma } => {
                let d = LogNormal::new((median as f64).ln(), sigma).expect("checked parameters");
                (d.sample(rng).round() as Amount).max(1)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleFreeParams {
    pub nodes: usize,
    /// Edges added with each new node.
    pub m: usize,
    pub amounts: AmountDist,
    pub seed: u64,
}

impl ScaleFreeParams {
    pub fn new(nodes: usize, m: usize, seed: u64) -> Self {
        ScaleFreeParams {
            nodes,
            m,
            amounts: AmountDist::default(),
            seed,
        }
    }
}

/// Preferential attachment: a complete core of `m + 1` nodes, then each new
/// node links to `m` distinct existing nodes picked in proportion to degree.
/// Every link gets a coin-flip orientation and a sampled amount.
pub fn generate_scale_free(params: &ScaleFreeParams) -> Result<ObligationGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let links = attach(params, &mut rng)?;
    let names = node_names(params.nodes);
    let width = digits(links.len());
    let records = links
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let (d, c) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            let amount = params.amounts.sample(&mut rng);
            Obligation::new(&format!("e{i:0width$}"), &names[d], &names[c], amount)
        })
        .collect();
    Ok(ObligationGraph::with_nodes(
        names.iter().map(|n| NodeId::new(n.as_str())),
        records,
    ))
}

fn attach(params: &ScaleFreeParams, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let ScaleFreeParams { nodes: n, m, .. } = *params;
    if m == 0 || n < m + 1 {
        return Err(Error::InvalidParameter(format!(
            "need m >= 1 and n >= m + 1, got n={n} m={m}"
        )));
    }
    params.amounts.check()?;
    let mut links = Vec::with_capacity(n * m);
    // Each node appears once per incident link, so a uniform draw from this
    // list is a degree-proportional draw.
    let mut ends = Vec::with_capacity(2 * n * m);
    for a in 0..=m {
        for b in a + 1..=m {
            links.push((a, b));
            ends.extend([a, b]);
        }
    }
    let mut picked = Vec::with_capacity(m);
    for new in m + 1..n {
        picked.clear();
        while picked.len() < m {
            let t = *ends.choose(rng).expect("core is non-empty");
            if !picked.contains(&t) {
                picked.push(t);
            }
        }
        for &t in &picked {
            links.push((new, t));
            ends.extend([new, t]);
        }
    }
    Ok(links)
}

fn digits(n: usize) -> usize {
    n.max(1).to_string().len()
}

fn node_names(n: usize) -> Vec<String> {
    let width = digits(n.saturating_sub(1));
    (0..n).map(|i| format!("f{i:0width$}")).collect()
}

/// A trade-credit network plus market-making firms that finance it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpMarketParams {
    pub network: ScaleFreeParams,
    /// Number of liquidity-provider firms to add.
    pub lp_firms: usize,
    /// Financing legs each LP firm writes on each side.
    pub links_per_lp: usize,
    /// LP amounts are multiples of this; trade amounts never are.
    pub modulus: Amount,
}

impl LpMarketParams {
    pub fn new(nodes: usize, m: usize, seed: u64) -> Self {
        LpMarketParams {
            network: ScaleFreeParams::new(nodes, m, seed),
            lp_firms: 3,
            links_per_lp: 4,
            modulus: super::DEFAULT_LP_MODULUS,
        }
    }
}

/// Scale-free trade network with bridging liquidity providers.
///
/// Each LP firm `L` takes on receivables from net creditors (`C → L`) and
/// extends credit to net debtors (`L → D`) in round amounts. Trade chains run
/// from debtors to creditors, so the LP legs close them into cycles that only
/// exist while `L` is present.
pub fn generate_lp_market(params: &LpMarketParams) -> Result<ObligationGraph> {
    if params.modulus <= 0 || params.lp_firms == 0 || params.links_per_lp == 0 {
        return Err(Error::InvalidParameter(
            "LP market needs positive modulus, firms and links".into(),
        ));
    }
    let base = generate_scale_free(&params.network)?;
    let mut records: Vec<Obligation> = base
        .records()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            if r.amount % params.modulus == 0 {
                r.amount += 1;
            }
            r
        })
        .collect();

    let balance = balance_vector(&base, KindSet::OBLIGATIONS);
    let mut creditors: Vec<(&NodeId, Amount)> = balance.iter().filter(|(_, b)| *b > 0).collect();
    let mut debtors: Vec<(&NodeId, Amount)> = balance.iter().filter(|(_, b)| *b < 0).collect();
    creditors.sort_by_key(|&(n, b)| (-b, n.clone()));
    debtors.sort_by_key(|&(n, b)| (b, n.clone()));
    let pool = |v: &[(&NodeId, Amount)]| {
        v.iter()
            .take(4 * params.links_per_lp)
            .map(|(n, _)| (*n).clone())
            .collect()
    };
    let (creditors, debtors): (Vec<NodeId>, Vec<NodeId>) = (pool(&creditors), pool(&debtors));
    if creditors.is_empty() || debtors.is_empty() {
        return Err(Error::InvalidParameter(
            "network has no net creditors or debtors".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.network.seed ^ 0x4c50_4d4b);
    let width = digits(params.lp_firms);
    let mut next = 0;
    for j in 0..params.lp_firms {
        let lp = format!("LP{j:0width$}");
        let sides = [(&creditors, true), (&debtors, false)];
        for (side, into_lp) in sides {
            for peer in side.choose_multiple(&mut rng, params.links_per_lp) {
                let amount = params.modulus * rng.gen_range(1..=3);
                let (d, c) = if into_lp {
                    (peer.as_str(), lp.as_str())
                } else {
                    (lp.as_str(), peer.as_str())
                };
                records.push(Obligation::new(&format!("lp{next:04}"), d, c, amount));
                next += 1;
            }
        }
    }
    Ok(ObligationGraph::with_nodes(
        base.nodes().iter().cloned(),
        records,
    ))
}
