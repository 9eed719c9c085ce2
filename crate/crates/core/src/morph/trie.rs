/// Character trie over surface strings; each terminal node carries the ids of
/// every entry with that surface, in insertion order.
#[derive(Debug, Clone, Default)]
pub(crate) struct SurfaceTrie {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Default)]
struct Node {
    children: Vec<(char, u32)>,
    values: Vec<u32>,
}

impl SurfaceTrie {
    pub fn new() -> Self {
        SurfaceTrie {
            nodes: vec![Node::default()],
        }
    }

    pub fn insert(&mut self, key: &str, value: u32) {
        let mut at = 0usize;
        for c in key.chars() {
            at = match self.nodes[at].children.binary_search_by_key(&c, |(k, _)| *k) {
                Ok(i) => self.nodes[at].children[i].1 as usize,
                Err(i) => {
                    let next = self.nodes.len() as u32;
                    self.nodes.push(Node::default());
                    self.nodes[at].children.insert(i, (c, next));
                    next as usize
                }
            };
        }
        self.nodes[at].values.push(value);
    }

    /// Calls `f(end, values)` for every key that is a prefix of
    /// `text[start..]`, shortest first. `end` is a byte offset into `text`.
    pub fn for_each_prefix<F: FnMut(usize, &[u32])>(&self, text: &str, start: usize, mut f: F) {
        let mut at = 0usize;
        for (off, c) in text[start..].char_indices() {
            match self.nodes[at]
                .children
                .binary_search_by_key(&c, |(k, _)| *k)
            {
                Ok(i) => at = self.nodes[at].children[i].1 as usize,
                Err(_) => return,
            }
            let values = &self.nodes[at].values;
            if !values.is_empty() {
                f(start + off + c.len_utf8(), values);
            }
        }
    }
}
