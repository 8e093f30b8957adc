#include "minibmc/model_headers.hpp"

// Operational models for the supported standard headers.  Each container
// class keeps no ordinary data members: its state (element array, key array,
// size) lives in the verifier's container registry and is manipulated
// through the reserved __ESBMC_* intrinsics.  Method bodies start with an
// __ESBMC_HIDE label so their internal steps are omitted from traces.

namespace minibmc {

namespace {

const char *kCassert = R"(
void assert(bool cond);
)";

const char *kException = R"(
class exception {
public:
  exception() {}
};

class bad_exception : public exception {
public:
  bad_exception() {}
};

void set_terminate(void (*handler)());
void set_unexpected(void (*handler)());
void terminate();
)";

const char *kVector = R"(
template <typename T> class vector;

template <typename T>
class __vec_iter {
public:
  vector<T>* __c;
  long __pos;
  __vec_iter() { __ESBMC_HIDE:; __pos = 0; }
  T& operator*() { __ESBMC_HIDE:; return __ESBMC_elem(__c, __pos); }
  __vec_iter<T>& operator++() { __ESBMC_HIDE:; __pos = __pos + 1; return *this; }
  __vec_iter<T> operator++(int) {
    __ESBMC_HIDE:;
    __vec_iter<T> old;
    old.__c = __c; old.__pos = __pos;
    __pos = __pos + 1;
    return old;
  }
  __vec_iter<T>& operator--() { __ESBMC_HIDE:; __pos = __pos - 1; return *this; }
  bool operator==(__vec_iter<T> o) { __ESBMC_HIDE:; return __pos == o.__pos; }
  bool operator!=(__vec_iter<T> o) { __ESBMC_HIDE:; return __pos != o.__pos; }
};

template <typename T>
class vector {
public:
  typedef __vec_iter<T> iterator;

  vector() { __ESBMC_HIDE:; __ESBMC_seq_init(this); }
  vector(const vector<T>& o) { __ESBMC_HIDE:; __ESBMC_copy(this, &o); }
  vector<T>& operator=(const vector<T>& o) {
    __ESBMC_HIDE:;
    __ESBMC_copy(this, &o);
    return *this;
  }

  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }

  T& operator[](unsigned long i) {
    __ESBMC_HIDE:;
    __ESBMC_assert(i >= 0 && i < __ESBMC_size(this), "Out of bounds violation");
    return __ESBMC_elem(this, i);
  }
  T& at(unsigned long i) {
    __ESBMC_HIDE:;
    __ESBMC_assert(i >= 0 && i < __ESBMC_size(this), "Out of bounds violation");
    return __ESBMC_elem(this, i);
  }
  T& front() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, 0);
  }
  T& back() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, __ESBMC_size(this) - 1);
  }

  void push_back(T x) { __ESBMC_HIDE:; __ESBMC_seq_insert(this, __ESBMC_size(this), x); }
  void pop_back() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "pop from empty container");
    __ESBMC_seq_erase(this, __ESBMC_size(this) - 1);
  }

  iterator begin() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = 0;
    return it;
  }
  iterator end() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = __ESBMC_size(this);
    return it;
  }
  iterator insert(iterator pos, T x) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_seq_insert(this, pos.__pos, x);
    return r;
  }
  iterator erase(iterator pos) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_seq_erase(this, pos.__pos);
    return r;
  }
  void clear() { __ESBMC_HIDE:; __ESBMC_clear(this); }
};
)";

// "first"/"second" accesses on the map iterators are resolved by the type
// checker onto the key/element intrinsics.
const char *kMap = R"(
template <typename K, typename V> class map;

template <typename K, typename V>
class __map_iter {
public:
  map<K, V>* __c;
  long __pos;
  __map_iter() { __ESBMC_HIDE:; __pos = 0; }
  __map_iter<K, V>& operator++() { __ESBMC_HIDE:; __pos = __pos + 1; return *this; }
  __map_iter<K, V>& operator--() { __ESBMC_HIDE:; __pos = __pos - 1; return *this; }
  bool operator==(__map_iter<K, V> o) { __ESBMC_HIDE:; return __pos == o.__pos; }
  bool operator!=(__map_iter<K, V> o) { __ESBMC_HIDE:; return __pos != o.__pos; }
};

template <typename K, typename V>
class map {
public:
  typedef __map_iter<K, V> iterator;

  map() { __ESBMC_HIDE:; __ESBMC_assoc_init(this); }
  map(const map<K, V>& o) { __ESBMC_HIDE:; __ESBMC_copy(this, &o); }
  map<K, V>& operator=(const map<K, V>& o) {
    __ESBMC_HIDE:;
    __ESBMC_copy(this, &o);
    return *this;
  }

  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }

  V& operator[](K k) {
    __ESBMC_HIDE:;
    unsigned long p = __ESBMC_assoc_search(this, k);
    if (p == __ESBMC_size(this)) {
      V def = 0;
      p = __ESBMC_assoc_insert(this, k, def);
    }
    return __ESBMC_elem(this, p);
  }

  iterator insert(K k, V v) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_assoc_insert(this, k, v);
    return r;
  }
  iterator find(K k) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_assoc_search(this, k);
    return r;
  }
  unsigned long count(K k) { __ESBMC_HIDE:; return __ESBMC_count(this, k); }
  unsigned long erase(K k) { __ESBMC_HIDE:; return __ESBMC_assoc_erase(this, k); }
  iterator erase(iterator pos) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_erase_at(this, pos.__pos);
    return r;
  }

  iterator begin() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = 0;
    return it;
  }
  iterator end() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = __ESBMC_size(this);
    return it;
  }
  void clear() { __ESBMC_HIDE:; __ESBMC_clear(this); }
};

template <typename K, typename V> class multimap;

template <typename K, typename V>
class __mmap_iter {
public:
  multimap<K, V>* __c;
  long __pos;
  __mmap_iter() { __ESBMC_HIDE:; __pos = 0; }
  __mmap_iter<K, V>& operator++() { __ESBMC_HIDE:; __pos = __pos + 1; return *this; }
  __mmap_iter<K, V>& operator--() { __ESBMC_HIDE:; __pos = __pos - 1; return *this; }
  bool operator==(__mmap_iter<K, V> o) { __ESBMC_HIDE:; return __pos == o.__pos; }
  bool operator!=(__mmap_iter<K, V> o) { __ESBMC_HIDE:; return __pos != o.__pos; }
};

template <typename K, typename V>
class multimap {
public:
  typedef __mmap_iter<K, V> iterator;

  multimap() { __ESBMC_HIDE:; __ESBMC_assoc_multi_init(this); }

  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }
  iterator insert(K k, V v) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_assoc_insert(this, k, v);
    return r;
  }
  iterator find(K k) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_assoc_search(this, k);
    return r;
  }
  unsigned long count(K k) { __ESBMC_HIDE:; return __ESBMC_count(this, k); }
  unsigned long erase(K k) { __ESBMC_HIDE:; return __ESBMC_assoc_erase(this, k); }
  iterator begin() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = 0;
    return it;
  }
  iterator end() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = __ESBMC_size(this);
    return it;
  }
  void clear() { __ESBMC_HIDE:; __ESBMC_clear(this); }
};
)";

const char *kSet = R"(
template <typename K> class set;

template <typename K>
class __set_iter {
public:
  set<K>* __c;
  long __pos;
  __set_iter() { __ESBMC_HIDE:; __pos = 0; }
  K operator*() { __ESBMC_HIDE:; return __ESBMC_key_at(__c, __pos); }
  __set_iter<K>& operator++() { __ESBMC_HIDE:; __pos = __pos + 1; return *this; }
  __set_iter<K>& operator--() { __ESBMC_HIDE:; __pos = __pos - 1; return *this; }
  bool operator==(__set_iter<K> o) { __ESBMC_HIDE:; return __pos == o.__pos; }
  bool operator!=(__set_iter<K> o) { __ESBMC_HIDE:; return __pos != o.__pos; }
};

template <typename K>
class set {
public:
  typedef __set_iter<K> iterator;

  set() { __ESBMC_HIDE:; __ESBMC_assoc_init(this); }
  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }
  iterator insert(K k) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_assoc_insert(this, k, k);
    return r;
  }
  iterator find(K k) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_assoc_search(this, k);
    return r;
  }
  unsigned long count(K k) { __ESBMC_HIDE:; return __ESBMC_count(this, k); }
  unsigned long erase(K k) { __ESBMC_HIDE:; return __ESBMC_assoc_erase(this, k); }
  iterator begin() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = 0;
    return it;
  }
  iterator end() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = __ESBMC_size(this);
    return it;
  }
  void clear() { __ESBMC_HIDE:; __ESBMC_clear(this); }
};

template <typename K>
class multiset {
public:
  typedef __set_iter<K> iterator;

  multiset() { __ESBMC_HIDE:; __ESBMC_assoc_multi_init(this); }
  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }
  iterator insert(K k) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_assoc_insert(this, k, k);
    return r;
  }
  iterator find(K k) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_assoc_search(this, k);
    return r;
  }
  unsigned long count(K k) { __ESBMC_HIDE:; return __ESBMC_count(this, k); }
  unsigned long erase(K k) { __ESBMC_HIDE:; return __ESBMC_assoc_erase(this, k); }
  iterator begin() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = 0;
    return it;
  }
  iterator end() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = __ESBMC_size(this);
    return it;
  }
  void clear() { __ESBMC_HIDE:; __ESBMC_clear(this); }
};
)";

const char *kDeque = R"(
#include <vector>

template <typename T>
class deque {
public:
  typedef __vec_iter<T> iterator;

  deque() { __ESBMC_HIDE:; __ESBMC_seq_init(this); }
  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }
  T& operator[](unsigned long i) {
    __ESBMC_HIDE:;
    __ESBMC_assert(i >= 0 && i < __ESBMC_size(this), "Out of bounds violation");
    return __ESBMC_elem(this, i);
  }
  T& front() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, 0);
  }
  T& back() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, __ESBMC_size(this) - 1);
  }
  void push_back(T x) { __ESBMC_HIDE:; __ESBMC_seq_insert(this, __ESBMC_size(this), x); }
  void push_front(T x) { __ESBMC_HIDE:; __ESBMC_seq_insert(this, 0, x); }
  void pop_back() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "pop from empty container");
    __ESBMC_seq_erase(this, __ESBMC_size(this) - 1);
  }
  void pop_front() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "pop from empty container");
    __ESBMC_seq_erase(this, 0);
  }
  void clear() { __ESBMC_HIDE:; __ESBMC_clear(this); }
};
)";

const char *kList = R"(
#include <vector>

template <typename T>
class list {
public:
  typedef __vec_iter<T> iterator;

  list() { __ESBMC_HIDE:; __ESBMC_seq_init(this); }
  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }
  T& front() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, 0);
  }
  T& back() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, __ESBMC_size(this) - 1);
  }
  void push_back(T x) { __ESBMC_HIDE:; __ESBMC_seq_insert(this, __ESBMC_size(this), x); }
  void push_front(T x) { __ESBMC_HIDE:; __ESBMC_seq_insert(this, 0, x); }
  void pop_back() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "pop from empty container");
    __ESBMC_seq_erase(this, __ESBMC_size(this) - 1);
  }
  void pop_front() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "pop from empty container");
    __ESBMC_seq_erase(this, 0);
  }
  iterator insert(iterator pos, T x) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_seq_insert(this, pos.__pos, x);
    return r;
  }
  iterator erase(iterator pos) {
    __ESBMC_HIDE:;
    iterator r;
    r.__c = this; r.__pos = __ESBMC_seq_erase(this, pos.__pos);
    return r;
  }
  iterator begin() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = 0;
    return it;
  }
  iterator end() {
    __ESBMC_HIDE:;
    iterator it;
    it.__c = this; it.__pos = __ESBMC_size(this);
    return it;
  }
  void clear() { __ESBMC_HIDE:; __ESBMC_clear(this); }
};
)";

const char *kStack = R"(
template <typename T>
class stack {
public:
  stack() { __ESBMC_HIDE:; __ESBMC_seq_init(this); }
  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }
  void push(T x) { __ESBMC_HIDE:; __ESBMC_seq_insert(this, __ESBMC_size(this), x); }
  void pop() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "pop from empty container");
    __ESBMC_seq_erase(this, __ESBMC_size(this) - 1);
  }
  T& top() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, __ESBMC_size(this) - 1);
  }
};
)";

const char *kQueue = R"(
template <typename T>
class queue {
public:
  queue() { __ESBMC_HIDE:; __ESBMC_seq_init(this); }
  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }
  void push(T x) { __ESBMC_HIDE:; __ESBMC_seq_insert(this, __ESBMC_size(this), x); }
  void pop() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "pop from empty container");
    __ESBMC_seq_erase(this, 0);
  }
  T& front() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, 0);
  }
  T& back() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_elem(this, __ESBMC_size(this) - 1);
  }
};

template <typename T>
class priority_queue {
public:
  priority_queue() { __ESBMC_HIDE:; __ESBMC_assoc_multi_init(this); }
  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }
  void push(T x) { __ESBMC_HIDE:; __ESBMC_assoc_insert(this, x, x); }
  void pop() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "pop from empty container");
    __ESBMC_erase_at(this, __ESBMC_size(this) - 1);
  }
  T top() {
    __ESBMC_HIDE:;
    __ESBMC_assert(__ESBMC_size(this) > 0, "Out of bounds violation");
    return __ESBMC_key_at(this, __ESBMC_size(this) - 1);
  }
};
)";

const char *kString = R"(
class string {
public:
  string() { __ESBMC_HIDE:; __ESBMC_seq_init(this); }
  string(const string& o) { __ESBMC_HIDE:; __ESBMC_copy(this, &o); }
  string& operator=(const string& o) {
    __ESBMC_HIDE:;
    __ESBMC_copy(this, &o);
    return *this;
  }

  unsigned long size() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  unsigned long length() { __ESBMC_HIDE:; return __ESBMC_size(this); }
  bool empty() { __ESBMC_HIDE:; return __ESBMC_size(this) == 0; }

  char& operator[](unsigned long i) {
    __ESBMC_HIDE:;
    __ESBMC_assert(i >= 0 && i < __ESBMC_size(this), "Out of bounds violation");
    return __ESBMC_elem(this, i);
  }
  char& at(unsigned long i) {
    __ESBMC_HIDE:;
    __ESBMC_assert(i >= 0 && i < __ESBMC_size(this), "Out of bounds violation");
    return __ESBMC_elem(this, i);
  }

  void push_back(char c) { __ESBMC_HIDE:; __ESBMC_seq_insert(this, __ESBMC_size(this), c); }

  string& operator+=(const string& o) {
    __ESBMC_HIDE:;
    __ESBMC_str_append(this, &o);
    return *this;
  }
  string& append(const string& o) {
    __ESBMC_HIDE:;
    __ESBMC_str_append(this, &o);
    return *this;
  }
  string operator+(const string& o) {
    __ESBMC_HIDE:;
    string r;
    __ESBMC_copy(&r, this);
    __ESBMC_str_append(&r, &o);
    return r;
  }
  bool operator==(const string& o) { __ESBMC_HIDE:; return __ESBMC_str_eq(this, &o); }
  bool operator!=(const string& o) { __ESBMC_HIDE:; return !__ESBMC_str_eq(this, &o); }
  void clear() { __ESBMC_HIDE:; __ESBMC_clear(this); }
};
)";

// std::find / std::sort facades over full container ranges.
const char *kAlgorithm = R"(
#include <vector>

template <typename T>
__vec_iter<T> find(__vec_iter<T> first, __vec_iter<T> last, T value) {
  __ESBMC_HIDE:;
  __vec_iter<T> r;
  r.__c = first.__c;
  r.__pos = __ESBMC_seq_search_range(first.__c, first.__pos, last.__pos, value);
  return r;
}

template <typename T>
void sort(__vec_iter<T> first, __vec_iter<T> last) {
  __ESBMC_HIDE:;
  __ESBMC_sort_range(first.__c, first.__pos, last.__pos);
}
)";

} // namespace

const std::map<std::string, std::string> &builtin_model_headers() {
  static const std::map<std::string, std::string> headers = {
      {"cassert", kCassert},   {"assert", kCassert},
      {"exception", kException},
      {"vector", kVector},     {"map", kMap},
      {"set", kSet},           {"deque", kDeque},
      {"list", kList},         {"stack", kStack},
      {"queue", kQueue},       {"string", kString},
      {"algorithm", kAlgorithm},
  };
  return headers;
}

bool is_builtin_header(const std::string &name) {
  return builtin_model_headers().count(name) != 0;
}

} // namespace minibmc
