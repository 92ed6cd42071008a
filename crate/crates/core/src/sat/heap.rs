/// Binary max-heap of variables keyed by an external activity array.
pub(super) struct VarHeap {
    heap: Vec<usize>,
    /// Position of each variable in `heap`, or `usize::MAX` when absent.
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VarHeap {
    pub fn new(num_vars: usize) -> VarHeap {
        VarHeap {
            heap: Vec::with_capacity(num_vars),
            pos: vec![ABSENT; num_vars],
        }
    }

    #[inline]
    fn above(act: &[f64], a: usize, b: usize) -> bool {
        // ties go to the lower index so runs are reproducible
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    pub fn insert(&mut self, v: usize, act: &[f64]) {
        if self.pos[v] != ABSENT {
            return;
        }
        self.pos[v] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.pos[v], act);
    }

    pub fn increased(&mut self, v: usize, act: &[f64]) {
        if self.pos[v] != ABSENT {
            self.sift_up(self.pos[v], act);
        }
    }

    pub fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.heap[parent];
            if !Self::above(act, v, pv) {
                break;
            }
            self.heap[i] = pv;
            self.pos[pv] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && Self::above(act, self.heap[right], self.heap[left]) {
                right
            } else {
                left
            };
            let cv = self.heap[child];
            if !Self::above(act, cv, v) {
                break;
            }
            self.heap[i] = cv;
            self.pos[cv] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }
}
