//! Typed packets. Every packet is 512 bytes on the wire; the origin id is
//! stamped from the originating node's identity and cannot be rewritten.

use std::fmt;

use crate::net::NodeAttributes;
use crate::NodeId;

/// 4-bit message codes.
///
/// | code | kind |
/// |------|------|
/// | 0 | DATA |
/// | 1 | ACK |
/// | 2 | HELLO |
/// | 3 | HELLO_ACK |
/// | 4 | RREQ |
/// | 5 | RREP |
/// | 6 | HELLO_ENQ |
/// | 7 | HELLO_REPLY |
/// | 8 | ALLEGATION_LINK |
/// | 9 | ALLEGATION_DELAY |
/// | 10 | ALLEGATION_FLOOD |
/// | 11 | ALLEGATION_COLLUSION |
/// | 12 | COLLUSION_REQ |
/// | 13 | BICAST_COPY_RETURN |
/// | 14 | DEPARTURE_NOTICE |
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum MessageCode {
    Data = 0,
    Ack = 1,
    Hello = 2,
    HelloAck = 3,
    Rreq = 4,
    Rrep = 5,
    HelloEnq = 6,
    HelloReply = 7,
    AllegationLink = 8,
    AllegationDelay = 9,
    AllegationFlood = 10,
    AllegationCollusion = 11,
    CollusionReq = 12,
    BicastCopyReturn = 13,
    DepartureNotice = 14,
}

impl MessageCode {
    pub const ALL: [MessageCode; 15] = [
        MessageCode::Data,
        MessageCode::Ack,
        MessageCode::Hello,
        MessageCode::HelloAck,
        MessageCode::Rreq,
        MessageCode::Rrep,
        MessageCode::HelloEnq,
        MessageCode::HelloReply,
        MessageCode::AllegationLink,
        MessageCode::AllegationDelay,
        MessageCode::AllegationFlood,
        MessageCode::AllegationCollusion,
        MessageCode::CollusionReq,
        MessageCode::BicastCopyReturn,
        MessageCode::DepartureNotice,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            MessageCode::Data => "DATA",
            MessageCode::Ack => "ACK",
            MessageCode::Hello => "HELLO",
            MessageCode::HelloAck => "HELLO_ACK",
            MessageCode::Rreq => "RREQ",
            MessageCode::Rrep => "RREP",
            MessageCode::HelloEnq => "HELLO_ENQ",
            MessageCode::HelloReply => "HELLO_REPLY",
            MessageCode::AllegationLink => "ALLEGATION_LINK",
            MessageCode::AllegationDelay => "ALLEGATION_DELAY",
            MessageCode::AllegationFlood => "ALLEGATION_FLOOD",
            MessageCode::AllegationCollusion => "ALLEGATION_COLLUSION",
            MessageCode::CollusionReq => "COLLUSION_REQ",
            MessageCode::BicastCopyReturn => "BICAST_COPY_RETURN",
            MessageCode::DepartureNotice => "DEPARTURE_NOTICE",
        }
    }
}

impl fmt::Display for MessageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bytes on the wire for every packet kind.
pub const WIRE_BYTES: u32 = 512;

/// The right to originate messages as a particular node. Only the simulator
/// hands these out, one per node.
#[derive(Debug)]
pub struct NodeIdentity {
    id: NodeId,
}

impl NodeIdentity {
    pub(crate) fn issue(id: NodeId) -> Self {
        Self { id }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    code: MessageCode,
    origin: NodeId,
    timestamp: f64,
    sender_attrs: NodeAttributes,
    body: Vec<u8>,
}

impl Message {
    /// A new message originated by `identity` at `clock`.
    pub fn originate(
        identity: &NodeIdentity,
        code: MessageCode,
        clock: f64,
        sender_attrs: NodeAttributes,
        body: Vec<u8>,
    ) -> Self {
        Self {
            code,
            origin: identity.id,
            timestamp: clock,
            sender_attrs,
            body,
        }
    }

    pub fn code(&self) -> MessageCode {
        self.code
    }

    pub fn origin(&self) -> NodeId {
        self.origin
    }

    pub fn timestamp(&self) -> f64 {
        self.timestamp
    }

    pub fn sender_attrs(&self) -> &NodeAttributes {
        &self.sender_attrs
    }

    pub fn body(&self) -> &[u8] {
        &self.body
    }

    /// The copy a relay puts on the air: the origin and timestamp travel
    /// unchanged, only the sender attribute block is the relay's own.
    pub fn relay(&self, relay_attrs: NodeAttributes) -> Self {
        Self {
            sender_attrs: relay_attrs,
            ..self.clone()
        }
    }

    /// Whether two copies carry the same originated content.
    pub fn same_content(&self, other: &Message) -> bool {
        self.code == other.code
            && self.origin == other.origin
            && self.timestamp == other.timestamp
            && self.body == other.body
    }

    pub fn wire_bytes(&self) -> u32 {
        WIRE_BYTES
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn attrs(id: u32) -> NodeAttributes {
        NodeAttributes {
            node_id: id,
            lat: 0.0,
            long: 0.0,
            radio_range: 100.0,
            velocity: 0.0,
            hello_interval: 6.0,
            processing_time: 0.05,
            queue_size: 10,
        }
    }

    #[test]
    fn codes_fit_four_bits_and_round_trip() {
        for (k, code) in MessageCode::ALL.iter().enumerate() {
            assert_eq!(code.code() as usize, k);
            assert!(code.code() < 16);
            assert_eq!(MessageCode::from_code(code.code()), Some(*code));
        }
        assert_eq!(MessageCode::from_code(15), None);
        assert_eq!(MessageCode::DepartureNotice.code(), 14);
    }

    #[test]
    fn origin_survives_relays() {
        let id = NodeIdentity::issue(NodeId(3));
        let mut m = Message::originate(&id, MessageCode::Data, 1.5, attrs(3), vec![1, 2, 3]);
        for hop in 0..20 {
            m = m.relay(attrs(100 + hop));
        }
        assert_eq!(m.origin(), NodeId(3));
        assert_eq!(m.timestamp(), 1.5);
        assert_eq!(m.sender_attrs().node_id, 119);
        assert_eq!(m.wire_bytes(), 512);
    }

    #[test]
    fn content_equality_ignores_relay_attrs() {
        let id = NodeIdentity::issue(NodeId(1));
        let m = Message::originate(&id, MessageCode::Data, 0.0, attrs(1), vec![7; 8]);
        assert!(m.same_content(&m.relay(attrs(2))));
        let mut body = vec![7; 8];
        body[3] = 8;
        let other = Message::originate(&id, MessageCode::Data, 0.0, attrs(1), body);
        assert!(!m.same_content(&other));
    }
}
