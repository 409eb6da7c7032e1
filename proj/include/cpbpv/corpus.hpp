#pragma once
#include <string>
#include <vector>

#include "cpbpv/base.hpp"
namespace cpbpv {

// The benchmark corpus, embedded so the library and tests need no file-system
// paths. The same sources ship under benchmarks/ for command-line use; a test
// keeps the two in sync.

struct CorpusEntry {
    enum class Kind { Correct, Buggy, Auxiliary };
    std::string name;
    std::string filename;
    Kind kind;
    std::string source;
};
inline const char* const kSource_binary_search = R"__(# Binary search: index of v in the sorted array t, or -1 when absent.
requires forall i in [0, N - 1): t[i] <= t[i + 1]
ensures (result != -1 ==> t[result] == v)
     && (result == -1 ==> forall j in [0, N): t[j] != v)
int binary_search(int[N] t, int v) {
    int l = 0;
    int u = t.length - 1;
    while (l <= u) {
        int m = (l + u) / 2;
        if (t[m] == v)
            return m;
        if (t[m] > v)
            u = m - 1;
        else
            l = m + 1;
    }
    return -1;
}
)__";
inline const char* const kSource_binary_search_bug = R"__(# Binary search with the classic narrowing bug on the else branch.
requires forall i in [0, N - 1): t[i] <= t[i + 1]
ensures (result != -1 ==> t[result] == v)
     && (result == -1 ==> forall j in [0, N): t[j] != v)
int binary_search(int[N] t, int v) {
    int l = 0;
    int u = t.length - 1;
    while (l <= u) {
        int m = (l + u) / 2;
        if (t[m] == v)
            return m;
        if (t[m] > v)
            u = m - 1;
        else
            u = m - 1;
    }
    return -1;
}
)__";
inline const char* const kSource_tritype = R"__(# Triangle classification: 1 scalene, 2 isosceles, 3 equilateral, 4 no triangle.
requires i >= 0 && j >= 0 && k >= 0
ensures ((i + j <= k || j + k <= i || i + k <= j) ==> result == 4)
     && (!(i + j <= k || j + k <= i || i + k <= j) ==>
            ((i == j && j == k ==> result == 3)
          && ((i == j || i == k || j == k) && !(i == j && j == k) ==> result == 2)
          && (!(i == j || i == k || j == k) ==> result == 1)))
int tritype(int i, int j, int k) {
    int trityp = 0;
    if (i == 0 || j == 0 || k == 0)
        trityp = 4;
    else {
        trityp = 0;
        if (i == j) trityp = trityp + 1;
        if (i == k) trityp = trityp + 2;
        if (j == k) trityp = trityp + 3;
        if (trityp == 0) {
            if (i + j <= k || j + k <= i || i + k <= j)
                trityp = 4;
            else
                trityp = 1;
        }
        else {
            if (trityp > 3)
                trityp = 3;
            else {
                if (trityp == 1 && i + j > k)
                    trityp = 2;
                else if (trityp == 2 && i + k > j)
                    trityp = 2;
                else if (trityp == 3 && j + k > i)
                    trityp = 2;
                else
                    trityp = 4;
            }
        }
    }
    return trityp;
}
)__";
inline const char* const kSource_tritype_bug = R"__(# Triangle classification with the isosceles test confusing its case tag.
requires i >= 0 && j >= 0 && k >= 0
ensures ((i + j <= k || j + k <= i || i + k <= j) ==> result == 4)
     && (!(i + j <= k || j + k <= i || i + k <= j) ==>
            ((i == j && j == k ==> result == 3)
          && ((i == j || i == k || j == k) && !(i == j && j == k) ==> result == 2)
          && (!(i == j || i == k || j == k) ==> result == 1)))
int tritype(int i, int j, int k) {
    int trityp = 0;
    if (i == 0 || j == 0 || k == 0)
        trityp = 4;
    else {
        trityp = 0;
        if (i == j) trityp = trityp + 1;
        if (i == k) trityp = trityp + 2;
        if (j == k) trityp = trityp + 3;
        if (trityp == 0) {
            if (i + j <= k || j + k <= i || i + k <= j)
                trityp = 4;
            else
                trityp = 1;
        }
        else {
            if (trityp > 3)
                trityp = 3;
            else {
                if (trityp == 1 && i + j > k)
                    trityp = 2;
                else if (trityp == 1 && i + k > j)
                    trityp = 2;
                else if (trityp == 3 && j + k > i)
                    trityp = 2;
                else
                    trityp = 4;
            }
        }
    }
    return trityp;
}
)__";
inline const char* const kSource_bubble_sort = R"__(# Bubble sort of the fully determined input 0..N-1 given in decreasing order.
requires forall i in [0, N): t[i] == N - 1 - i
ensures forall i in [0, N - 1): t[i] <= t[i + 1]
int bubble_sort(int[N] t) {
    int i = t.length - 1;
    while (i > 0) {
        int j = 0;
        while (j < i) {
            if (t[j] > t[j + 1]) {
                int tmp = t[j];
                t[j] = t[j + 1];
                t[j + 1] = tmp;
            }
            j = j + 1;
        }
        i = i - 1;
    }
    return 0;
}
)__";
inline const char* const kSource_selection_sort = R"__(# Selection sort, verified modularly: find_min is summarized by its contract.
requires 0 <= i && i < N
ensures i <= result && result < N
     && forall j in [i, N): t[result] <= t[j]
int find_min(int[N] t, int i);

ensures forall p in [0, N - 1): t[p] <= t[p + 1]
int selection_sort(int[N] t) {
    int i = 0;
    while (i < N - 1) {
        int m = find_min(t, i);
        int tmp = t[i];
        t[i] = t[m];
        t[m] = tmp;
        i = i + 1;
    }
    return 0;
}
)__";
inline const char* const kSource_sum_of_squares = R"__(# Sum of the squares of a permutation of 1..N.
requires alldifferent(t) && forall i in [0, N): (t[i] >= 1 && t[i] <= N)
ensures result == N * (N + 1) * (2 * N + 1) / 6
int sum_of_squares(int[N] t) {
    int s = 0;
    int i = 0;
    while (i < N) {
        s = s + t[i] * t[i];
        i = i + 1;
    }
    return s;
}
)__";
inline const char* const kSource_find_min = R"__(# Index of a minimum element of t[i .. N).
requires 0 <= i && i < N
ensures i <= result && result < N
     && forall j in [i, N): t[result] <= t[j]
int find_min(int[N] t, int i) {
    int k = i;
    int j = i + 1;
    while (j < N) {
        if (t[j] < t[k])
            k = j;
        j = j + 1;
    }
    return k;
}
)__";

/// The benchmark programs: the named correct/buggy set plus auxiliaries
/// (full sources needed by the modular benchmarks).
inline const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = {
        {"binary_search", "binary_search.cpv", CorpusEntry::Kind::Correct, kSource_binary_search},
        {"binary_search_bug", "binary_search_bug.cpv", CorpusEntry::Kind::Buggy, kSource_binary_search_bug},
        {"tritype", "tritype.cpv", CorpusEntry::Kind::Correct, kSource_tritype},
        {"tritype_bug", "tritype_bug.cpv", CorpusEntry::Kind::Buggy, kSource_tritype_bug},
        {"bubble_sort", "bubble_sort.cpv", CorpusEntry::Kind::Correct, kSource_bubble_sort},
        {"selection_sort", "selection_sort.cpv", CorpusEntry::Kind::Correct, kSource_selection_sort},
        {"sum_of_squares", "sum_of_squares.cpv", CorpusEntry::Kind::Correct, kSource_sum_of_squares},
        {"find_min", "find_min.cpv", CorpusEntry::Kind::Auxiliary, kSource_find_min},
    };
    return entries;
}

inline const CorpusEntry& corpus_entry(const std::string& name) {
    for (const auto& e : corpus())
        if (e.name == name) return e;
    throw VerifyError("no corpus entry named '" + name + "'");
}

}  // namespace cpbpv
