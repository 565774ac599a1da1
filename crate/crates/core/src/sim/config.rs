use crate::error::{Error, Result};
use crate::model::{db_to_linear, dbm_to_watts, PowerLimits, SystemParams};

/// Parameters of a Monte Carlo campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Circumradius of the hexagonal cell.
    pub cell_radius_m: f64,
    pub path_loss_exponent: f64,
    pub shadowing_std_db: f64,
    /// Power cap shared by every transmitter.
    pub p_max_dbm: f64,
    pub total_bandwidth_mhz: f64,
    pub n_channels: usize,
    /// Noise power over one channel.
    pub noise_dbm: f64,
    pub k_users: usize,
    pub d_pairs: usize,
    pub d_max_m: f64,
    pub r_u_min_bps: f64,
    /// Residual self-interference factor, common to both devices.
    pub eta_db: f64,
    pub trials: usize,
    pub master_seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            cell_radius_m: 300.0,
            path_loss_exponent: 3.76,
            shadowing_std_db: 8.0,
            p_max_dbm: 24.0,
            total_bandwidth_mhz: 20.0,
            n_channels: 64,
            noise_dbm: -119.0,
            k_users: 20,
            d_pairs: 5,
            d_max_m: 100.0,
            r_u_min_bps: 1.5e6,
            eta_db: -110.0,
            trials: 200,
            master_seed: 1,
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cell_radius_m", self.cell_radius_m),
            ("path_loss_exponent", self.path_loss_exponent),
            ("total_bandwidth_mhz", self.total_bandwidth_mhz),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(format!("{name} must be > 0, got {v}")));
            }
        }
        let finite = [
            ("p_max_dbm", self.p_max_dbm),
            ("noise_dbm", self.noise_dbm),
            ("eta_db", self.eta_db),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(bad(format!("{name} must be finite, got {v}")));
            }
        }
        if !(self.shadowing_std_db.is_finite() && self.shadowing_std_db >= 0.0) {
            return Err(bad("shadowing_std_db must be >= 0"));
        }
        if !(self.d_max_m.is_finite() && self.d_max_m >= 0.0) {
            return Err(bad("d_max_m must be >= 0"));
        }
        if !(self.r_u_min_bps.is_finite() && self.r_u_min_bps >= 0.0) {
            return Err(bad("r_u_min_bps must be >= 0"));
        }
        if self.eta_db > 0.0 {
            return Err(bad("eta_db must be <= 0 (a cancellation factor)"));
        }
        if self.n_channels == 0 {
            return Err(bad("n_channels must be >= 1"));
        }
        if self.trials == 0 {
            return Err(bad("trials must be >= 1"));
        }
        if !(self.d_pairs <= self.k_users && self.k_users <= self.n_channels) {
            return Err(bad(format!(
                "need d_pairs <= k_users <= n_channels, got {} / {} / {}",
                self.d_pairs, self.k_users, self.n_channels
            )));
        }
        Ok(())
    }

    pub fn channel_bandwidth_hz(&self) -> f64 {
        self.total_bandwidth_mhz * 1e6 / self.n_channels as f64
    }

    pub fn params(&self) -> SystemParams {
        let eta = db_to_linear(self.eta_db);
        SystemParams {
            bandwidth_hz: self.channel_bandwidth_hz(),
            noise_w: dbm_to_watts(self.noise_dbm),
            eta1: eta,
            eta2: eta,
            r_u_min_bps: self.r_u_min_bps,
        }
    }

    pub fn limits(&self) -> PowerLimits {
        let p = dbm_to_watts(self.p_max_dbm);
        PowerLimits {
            p1_max_w: p,
            p2_max_w: p,
            pu_max_w: p,
        }
    }
}
