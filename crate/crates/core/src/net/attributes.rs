//! The 53-bit node attribute block carried in HELLOs, ACKs and data packets.
//!
//! Fields are packed big-endian (first field in the most significant bits):
//!
//! | field          | bits | range        | unit    |
//! |----------------|------|--------------|---------|
//! | node_id        | 13   | 0..5000      |         |
//! | latitude       | 11   | 0..=2000     | 1 m     |
//! | longitude      | 10   | 0..=1000     | 1 m     |
//! | radio range    | 8    | 0..=250      | 1 m     |
//! | velocity       | 6    | 0..=50       | 1 m/s   |
//! | hello interval | 5    | 0..30        | 1 s     |

use crate::error::{Error, Result};

pub const BLOCK_BITS: u32 = 53;

const FIELDS: [(&str, u32, f64); 6] = [
    ("node_id", 13, 4999.0),
    ("lat", 11, 2000.0),
    ("long", 10, 1000.0),
    ("radio_range", 8, 250.0),
    ("velocity", 6, 50.0),
    ("hello_interval", 5, 29.0),
];

/// Per-node attributes. Only the first six fields travel in the block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeAttributes {
    pub node_id: u32,
    pub lat: f64,
    pub long: f64,
    pub radio_range: f64,
    pub velocity: f64,
    pub hello_interval: f64,
    pub processing_time: f64,
    pub queue_size: u32,
}

/// A packed block; always fits in the low 53 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AttributeBlock(u64);

impl AttributeBlock {
    pub fn from_bits(bits: u64) -> Option<Self> {
        (bits >> BLOCK_BITS == 0).then_some(Self(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The block as a 53-character string of `0`/`1`.
    pub fn to_bit_string(self) -> String {
        format!("{:053b}", self.0)
    }
}

fn quantize(name: &'static str, value: f64, max: f64) -> Result<u64> {
    if !(value >= 0.0 && value <= max) {
        return Err(Error::AttributeOutOfRange { field: name, value });
    }
    Ok(value.round().min(max) as u64)
}

pub fn encode_attributes(attrs: &NodeAttributes) -> Result<AttributeBlock> {
    let values = [
        attrs.node_id as f64,
        attrs.lat,
        attrs.long,
        attrs.radio_range,
        attrs.velocity,
        attrs.hello_interval,
    ];
    let mut bits = 0u64;
    for ((name, width, max), value) in FIELDS.iter().zip(values) {
        bits = (bits << width) | quantize(name, value, *max)?;
    }
    Ok(AttributeBlock(bits))
}

/// Inverse of [`encode_attributes`] on the six packed fields; the
/// non-packed fields come back zeroed.
pub fn decode_attributes(block: AttributeBlock) -> NodeAttributes {
    let mut values = [0u64; 6];
    let mut rest = block.0;
    for (k, (_, width, _)) in FIELDS.iter().enumerate().rev() {
        values[k] = rest & ((1u64 << width) - 1);
        rest >>= width;
    }
    NodeAttributes {
        node_id: values[0] as u32,
        lat: values[1] as f64,
        long: values[2] as f64,
        radio_range: values[3] as f64,
        velocity: values[4] as f64,
        hello_interval: values[5] as f64,
        processing_time: 0.0,
        queue_size: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero() -> NodeAttributes {
        NodeAttributes {
            node_id: 0,
            lat: 0.0,
            long: 0.0,
            radio_range: 0.0,
            velocity: 0.0,
            hello_interval: 0.0,
            processing_time: 0.0,
            queue_size: 0,
        }
    }

    #[test]
    fn field_widths_sum_to_53() {
        assert_eq!(FIELDS.iter().map(|f| f.1).sum::<u32>(), BLOCK_BITS);
    }

    #[test]
    fn zero_block() {
        let b = encode_attributes(&zero()).unwrap();
        assert_eq!(b.to_bit_string(), "0".repeat(53));
    }

    #[test]
    fn node_id_occupies_top_field() {
        let b = encode_attributes(&NodeAttributes {
            node_id: 4999,
            ..zero()
        })
        .unwrap();
        assert_eq!(&b.to_bit_string()[..13], "1001110000111");
        assert_eq!(&b.to_bit_string()[13..], "0".repeat(40));
    }

    #[test]
    fn out_of_range_fields_rejected() {
        for bad in [
            NodeAttributes {
                node_id: 5000,
                ..zero()
            },
            NodeAttributes {
                lat: 2000.5,
                ..zero()
            },
            NodeAttributes {
                long: -1.0,
                ..zero()
            },
            NodeAttributes {
                radio_range: 251.0,
                ..zero()
            },
            NodeAttributes {
                velocity: 51.0,
                ..zero()
            },
            NodeAttributes {
                hello_interval: 30.0,
                ..zero()
            },
            NodeAttributes {
                lat: f64::NAN,
                ..zero()
            },
        ] {
            assert!(encode_attributes(&bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn quantizes_to_whole_units() {
        let a = NodeAttributes {
            node_id: 17,
            lat: 1234.4,
            long: 999.6,
            radio_range: 180.2,
            velocity: 12.5,
            hello_interval: 7.0,
            ..zero()
        };
        let d = decode_attributes(encode_attributes(&a).unwrap());
        assert_eq!(
            (d.lat, d.long, d.radio_range, d.velocity),
            (1234.0, 1000.0, 180.0, 13.0)
        );
    }

    #[test]
    fn from_bits_rejects_wide_values() {
        assert!(AttributeBlock::from_bits(1 << 53).is_none());
        assert!(AttributeBlock::from_bits((1 << 53) - 1).is_some());
    }
}
