/// Disc-model radio: fixed-size packets, serialization delay only, and a
/// constant energy cost per transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioModel {
    pub packet_bytes: u32,
    pub bandwidth_bps: f64,
    /// Energy per one-hop transmission.
    pub sigma: f64,
}

impl Default for RadioModel {
    fn default() -> Self {
        Self {
            packet_bytes: 512,
            bandwidth_bps: 1.0e6,
            sigma: 1.0,
        }
    }
}

impl RadioModel {
    /// Time for one packet to leave the sender and arrive at a neighbour.
    pub fn tx_delay(&self) -> f64 {
        self.packet_bytes as f64 * 8.0 / self.bandwidth_bps
    }

    pub fn delivery_time(&self, sent_at: f64) -> f64 {
        sent_at + self.tx_delay()
    }

    pub fn energy(&self, transmissions: u64) -> f64 {
        self.sigma * transmissions as f64
    }
}
