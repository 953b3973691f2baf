#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridups/errors.hpp"

namespace gridups {

/* *** Grid diagrams *** */
//
// Cells are addressed (row, col) with row 0 at the BOTTOM of the picture; the
// file format lists rows top to bottom, so parsing reverses line order.
// Every row and column carries exactly one O-type marking (O or O*), so
// markings and polynomial variables are indexed by their row throughout.

enum class Mode { graph, link, extended };

inline std::string mode_name(Mode m) {
    switch (m) {
        case Mode::graph: return "graph";
        case Mode::link: return "link";
        default: return "extended";
    }
}

inline Mode mode_from_name(const std::string& s) {
    if (s == "graph") return Mode::graph;
    if (s == "link") return Mode::link;
    if (s == "extended") return Mode::extended;
    throw invalid_input_error("unknown mode: " + s);
}

constexpr uint8_t CELL_X = 1;
constexpr uint8_t CELL_O = 2;
constexpr uint8_t CELL_OSTAR = 4;

struct GridDiagram {
    int n = 0;
    Mode mode = Mode::graph;
    std::vector<uint8_t> cells; // n*n, row-major from row 0

    uint8_t cell(int r, int c) const { return cells[static_cast<size_t>(r) * n + c]; }
    uint8_t& cell(int r, int c) { return cells[static_cast<size_t>(r) * n + c]; }
    bool has_x(int r, int c) const { return cell(r, c) & CELL_X; }
    bool has_o(int r, int c) const { return cell(r, c) & (CELL_O | CELL_OSTAR); }
    bool has_ostar(int r, int c) const { return cell(r, c) & CELL_OSTAR; }

    friend bool operator==(const GridDiagram& a, const GridDiagram& b) {
        return a.n == b.n && a.cells == b.cells;
    }
};

inline std::string cell_token(uint8_t bits) {
    switch (bits) {
        case 0: return ".";
        case CELL_X: return "X";
        case CELL_O: return "O";
        case CELL_OSTAR: return "O*";
        case CELL_X | CELL_O: return "XO";
        case CELL_X | CELL_OSTAR: return "XO*";
        default: throw invariant_violation_error("unrepresentable cell contents");
    }
}

inline uint8_t cell_bits(const std::string& tok) {
    if (tok == ".") return 0;
    if (tok == "X") return CELL_X;
    if (tok == "O") return CELL_O;
    if (tok == "O*") return CELL_OSTAR;
    if (tok == "XO") return CELL_X | CELL_O;
    if (tok == "XO*") return CELL_X | CELL_OSTAR;
    throw invalid_input_error("unknown cell token: '" + tok + "'");
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Format:
//   n=<int> mode=<graph|link|extended>
//   <n comma-separated rows, top to bottom>
inline GridDiagram parse_diagram(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw invalid_input_error("empty diagram file");
    line = trim(line);

    GridDiagram g;
    {
        std::istringstream hdr(line);
        std::string field;
        bool saw_n = false, saw_mode = false;
        while (hdr >> field) {
            auto eq = field.find('=');
            if (eq == std::string::npos) throw invalid_input_error("malformed header field: " + field);
            std::string key = field.substr(0, eq), val = field.substr(eq + 1);
            if (key == "n") {
                try { g.n = std::stoi(val); } catch (const std::logic_error&) {
                    throw invalid_input_error("bad grid size: " + val);
                }
                saw_n = true;
            } else if (key == "mode") {
                g.mode = mode_from_name(val);
                saw_mode = true;
            } else {
                throw invalid_input_error("unknown header field: " + key);
            }
        }
        if (!saw_n || !saw_mode) throw invalid_input_error("header must contain n= and mode=");
    }
    if (g.n < 1 || g.n > 16) throw invalid_input_error("grid size out of range [1,16]");
    g.cells.assign(static_cast<size_t>(g.n) * g.n, 0);

    for (int k = 0; k < g.n; ++k) {
        if (!std::getline(in, line)) throw invalid_input_error("expected " + std::to_string(g.n) + " rows");
        line = trim(line);
        int r = g.n - 1 - k; // file lists top row first
        std::istringstream row(line);
        std::string tok;
        for (int c = 0; c < g.n; ++c) {
            if (!std::getline(row, tok, ',')) throw invalid_input_error("row has too few cells: " + line);
            g.cell(r, c) = cell_bits(trim(tok));
        }
        if (std::getline(row, tok) && !trim(tok).empty())
            throw invalid_input_error("row has too many cells: " + line);
    }
    while (std::getline(in, line))
        if (!trim(line).empty()) throw invalid_input_error("trailing content after grid rows");
    return g;
}

inline std::string serialize_diagram(const GridDiagram& g) {
    std::string out = "n=" + std::to_string(g.n) + " mode=" + mode_name(g.mode) + "\n";
    for (int r = g.n - 1; r >= 0; --r) {
        for (int c = 0; c < g.n; ++c) {
            if (c) out += ",";
            out += cell_token(g.cell(r, c));
        }
        out += "\n";
    }
    return out;
}

/* *** Marking bookkeeping *** */

inline int x_count_row(const GridDiagram& g, int r) {
    int k = 0;
    for (int c = 0; c < g.n; ++c) k += g.has_x(r, c) ? 1 : 0;
    return k;
}

inline int x_count_col(const GridDiagram& g, int c) {
    int k = 0;
    for (int r = 0; r < g.n; ++r) k += g.has_x(r, c) ? 1 : 0;
    return k;
}

// Column of the O-marking in row r; requires a validated diagram.
inline int o_col(const GridDiagram& g, int r) {
    for (int c = 0; c < g.n; ++c)
        if (g.has_o(r, c)) return c;
    throw invariant_violation_error("row without O-marking");
}

// Row of the O-marking in column c.
inline int o_row(const GridDiagram& g, int c) {
    for (int r = 0; r < g.n; ++r)
        if (g.has_o(r, c)) return r;
    throw invariant_violation_error("column without O-marking");
}

inline std::vector<int> star_rows(const GridDiagram& g) {
    std::vector<int> rows;
    for (int r = 0; r < g.n; ++r)
        for (int c = 0; c < g.n; ++c)
            if (g.has_ostar(r, c)) rows.push_back(r);
    return rows;
}

// m[i] = number of X-markings in the row of O_i (markings are row-indexed).
inline std::vector<int> m_weights(const GridDiagram& g) {
    std::vector<int> m(g.n);
    for (int r = 0; r < g.n; ++r) m[r] = x_count_row(g, r);
    return m;
}

inline void validate(const GridDiagram& g) {
    if (g.n < 1) throw invalid_input_error("grid size must be positive");
    for (int r = 0; r < g.n; ++r)
        for (int c = 0; c < g.n; ++c) {
            uint8_t b = g.cell(r, c);
            if ((b & CELL_O) && (b & CELL_OSTAR))
                throw invalid_input_error("cell holds both O and O*");
            if ((b & CELL_X) && (b & (CELL_O | CELL_OSTAR)) && g.mode != Mode::extended)
                throw invalid_input_error("condition (iii) violated: X and O share cell (" +
                                          std::to_string(r) + "," + std::to_string(c) +
                                          ") outside extended mode");
        }
    for (int r = 0; r < g.n; ++r) {
        int os = 0;
        for (int c = 0; c < g.n; ++c) os += g.has_o(r, c) ? 1 : 0;
        if (os != 1)
            throw invalid_input_error("condition (i) violated: row " + std::to_string(r) + " has " +
                                      std::to_string(os) + " O-markings");
        int xs = x_count_row(g, r);
        if (xs < 1)
            throw invalid_input_error("condition (ii) violated: row " + std::to_string(r) + " has no X-marking");
        if (g.mode == Mode::link && xs != 1)
            throw invalid_input_error("link mode requires one X per row, row " + std::to_string(r) +
                                      " has " + std::to_string(xs));
    }
    for (int c = 0; c < g.n; ++c) {
        int os = 0;
        for (int r = 0; r < g.n; ++r) os += g.has_o(r, c) ? 1 : 0;
        if (os != 1)
            throw invalid_input_error("condition (i) violated: column " + std::to_string(c) + " has " +
                                      std::to_string(os) + " O-markings");
        int xs = x_count_col(g, c);
        if (xs < 1)
            throw invalid_input_error("condition (ii) violated: column " + std::to_string(c) + " has no X-marking");
        if (g.mode == Mode::link && xs != 1)
            throw invalid_input_error("link mode requires one X per column, column " + std::to_string(c) +
                                      " has " + std::to_string(xs));
    }
}

// Every vertex (O*) has equal in- and out-degree, i.e. as many X's in its row
// as in its column, and interior edge points (plain O) see exactly one X each way.
inline bool is_balanced(const GridDiagram& g, std::string* why = nullptr) {
    for (int r = 0; r < g.n; ++r) {
        int c = o_col(g, r);
        int xr = x_count_row(g, r), xc = x_count_col(g, c);
        if (g.has_ostar(r, c)) {
            if (xr != xc) {
                if (why) *why = "O* at (" + std::to_string(r) + "," + std::to_string(c) + ") has " +
                                std::to_string(xr) + " row-X vs " + std::to_string(xc) + " column-X";
                return false;
            }
        } else {
            if (xr != 1 || xc != 1) {
                if (why) *why = "plain O at (" + std::to_string(r) + "," + std::to_string(c) +
                                ") needs exactly one X in its row and column";
                return false;
            }
        }
    }
    return true;
}

inline bool is_link_shaped(const GridDiagram& g) {
    for (int r = 0; r < g.n; ++r)
        if (x_count_row(g, r) != 1) return false;
    for (int c = 0; c < g.n; ++c)
        if (x_count_col(g, c) != 1) return false;
    return true;
}

// Component count of a link-shaped diagram: follow row -> its X's column ->
// that column's O -> its row.
inline int link_components(const GridDiagram& g) {
    if (!is_link_shaped(g)) throw invalid_input_error("component count requires a link-shaped diagram");
    std::vector<int> xcol(g.n);
    for (int r = 0; r < g.n; ++r)
        for (int c = 0; c < g.n; ++c)
            if (g.has_x(r, c)) xcol[r] = c;
    std::vector<char> seen(g.n, 0);
    int comps = 0;
    for (int r0 = 0; r0 < g.n; ++r0) {
        if (seen[r0]) continue;
        ++comps;
        int r = r0;
        while (!seen[r]) {
            seen[r] = 1;
            r = o_row(g, xcol[r]);
        }
    }
    return comps;
}

// Tight: link-shaped with exactly one O* on every component.
inline bool is_tight_link(const GridDiagram& g) {
    if (!is_link_shaped(g)) return false;
    std::vector<int> xcol(g.n);
    for (int r = 0; r < g.n; ++r)
        for (int c = 0; c < g.n; ++c)
            if (g.has_x(r, c)) xcol[r] = c;
    std::vector<char> seen(g.n, 0);
    for (int r0 = 0; r0 < g.n; ++r0) {
        if (seen[r0]) continue;
        int stars = 0, r = r0;
        while (!seen[r]) {
            seen[r] = 1;
            if (g.has_ostar(r, o_col(g, r))) ++stars;
            r = o_row(g, xcol[r]);
        }
        if (stars != 1) return false;
    }
    return true;
}

inline Mode derive_mode(const GridDiagram& g) {
    for (int r = 0; r < g.n; ++r)
        for (int c = 0; c < g.n; ++c)
            if (g.has_x(r, c) && g.has_o(r, c)) return Mode::extended;
    return is_link_shaped(g) ? Mode::link : Mode::graph;
}

/* *** Planar realization *** */
//
// Cutting the torus along the circles through (0,0)-corner of cell (cut_r,
// cut_c) and unrolling. Coordinates are stored doubled so that marking
// centers (half-integers) stay integral.

struct PlanarPoint {
    int x2 = 0, y2 = 0;
};

struct PlanarDiagram {
    int n = 0;
    std::vector<PlanarPoint> os;     // os[i] = O of torus-row i
    std::vector<char> ostar;         // ostar[i] = O of row i is starred
    std::vector<PlanarPoint> xs;     // all X-markings
    std::vector<int> m;              // m[i] = X-count in torus-row i
    int cut_r = 0, cut_c = 0;

    PlanarPoint state_point(int torus_row, int torus_col) const {
        return PlanarPoint{2 * (((torus_col - cut_c) % n + n) % n),
                           2 * (((torus_row - cut_r) % n + n) % n)};
    }
};

inline PlanarDiagram planar_realization(const GridDiagram& g, int cut_r = 0, int cut_c = 0) {
    if (cut_r < 0 || cut_r >= g.n || cut_c < 0 || cut_c >= g.n)
        throw invalid_input_error("cut position outside grid");
    PlanarDiagram p;
    p.n = g.n;
    p.cut_r = cut_r;
    p.cut_c = cut_c;
    p.os.resize(g.n);
    p.ostar.assign(g.n, 0);
    p.m = m_weights(g);
    for (int r = 0; r < g.n; ++r)
        for (int c = 0; c < g.n; ++c) {
            PlanarPoint pt{2 * (((c - cut_c) % g.n + g.n) % g.n) + 1,
                           2 * (((r - cut_r) % g.n + g.n) % g.n) + 1};
            if (g.has_o(r, c)) {
                p.os[r] = pt;
                p.ostar[r] = g.has_ostar(r, c) ? 1 : 0;
            }
            if (g.has_x(r, c)) p.xs.push_back(pt);
        }
    return p;
}

/* *** Moves *** */

struct MoveDescriptor {
    enum class Kind {
        cyclic,        // a = row shift, b = column shift
        commute_cols,  // a = left column index (swaps a, a+1 mod n)
        commute_rows,  // a = lower row index
        stabilize,     // (a,b) = cell of the X to stabilize at
        destabilize,   // (a,b) = cell of the O introduced by the stabilization
        birth,         // (a,b) = cell of an existing O; new row/col go above-right
        death,         // (a,b) = cell of an isolated X+O pair
        xsaddle,       // (a,b) = bottom-left cell of the 2x2 block
        osaddle        // (a,b) = bottom-left cell of the 2x2 block
    };
    Kind kind;
    int a = 0, b = 0;
};

inline std::string move_name(MoveDescriptor::Kind k) {
    using K = MoveDescriptor::Kind;
    switch (k) {
        case K::cyclic: return "cyclic";
        case K::commute_cols: return "commutecols";
        case K::commute_rows: return "commuterows";
        case K::stabilize: return "stab";
        case K::destabilize: return "destab";
        case K::birth: return "birth";
        case K::death: return "death";
        case K::xsaddle: return "xsaddle";
        default: return "osaddle";
    }
}

inline std::string serialize_move(const MoveDescriptor& m) {
    using K = MoveDescriptor::Kind;
    if (m.kind == K::commute_cols || m.kind == K::commute_rows)
        return move_name(m.kind) + " " + std::to_string(m.a);
    return move_name(m.kind) + " " + std::to_string(m.a) + " " + std::to_string(m.b);
}

inline MoveDescriptor parse_move(const std::string& line) {
    std::istringstream in(line);
    std::string name;
    if (!(in >> name)) throw invalid_input_error("empty move line");
    using K = MoveDescriptor::Kind;
    MoveDescriptor m{};
    bool two = true;
    if (name == "cyclic") m.kind = K::cyclic;
    else if (name == "commutecols") { m.kind = K::commute_cols; two = false; }
    else if (name == "commuterows") { m.kind = K::commute_rows; two = false; }
    else if (name == "stab") m.kind = K::stabilize;
    else if (name == "destab") m.kind = K::destabilize;
    else if (name == "birth") m.kind = K::birth;
    else if (name == "death") m.kind = K::death;
    else if (name == "xsaddle") m.kind = K::xsaddle;
    else if (name == "osaddle") m.kind = K::osaddle;
    else throw invalid_input_error("unknown move: " + name);
    if (!(in >> m.a)) throw invalid_input_error("move missing arguments: " + line);
    if (two && !(in >> m.b)) throw invalid_input_error("move missing second argument: " + line);
    std::string rest;
    if (in >> rest) throw invalid_input_error("trailing arguments on move: " + line);
    return m;
}

// Lines, '#' comments and blank lines allowed.
inline std::vector<MoveDescriptor> parse_moves(const std::string& text) {
    std::vector<MoveDescriptor> moves;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        moves.push_back(parse_move(line));
    }
    return moves;
}

namespace detail {

inline int wrap(int v, int n) { return ((v % n) + n) % n; }

// Marking heights (doubled: cell row r -> 2r+1) in the given column/row pair.
inline void commute_heights(const GridDiagram& g, bool cols, int idx, std::vector<int>& h1,
                            std::vector<int>& h2) {
    int other = wrap(idx + 1, g.n);
    for (int k = 0; k < g.n; ++k) {
        uint8_t b1 = cols ? g.cell(k, idx) : g.cell(idx, k);
        uint8_t b2 = cols ? g.cell(k, other) : g.cell(other, k);
        if (b1) h1.push_back(2 * k + 1);
        if (b2) h2.push_back(2 * k + 1);
    }
}

// Is height h (doubled) inside the closed arc from a to b, moving upward?
inline bool in_arc(int h, int a, int b, int n2) {
    return wrap(h - a, n2) <= wrap(b - a, n2);
}

// The interleaving condition: two complementary closed arcs sharing their two
// endpoints must separate the marking heights of the two adjacent
// columns/rows. Brute force over all endpoint pairs on the doubled circle.
inline bool commute_legal(const GridDiagram& g, bool cols, int idx) {
    std::vector<int> h1, h2;
    commute_heights(g, cols, idx, h1, h2);
    int n2 = 2 * g.n;
    for (int a = 0; a < n2; ++a)
        for (int b = 0; b < n2; ++b) {
            if (a == b) continue;
            bool ok = true;
            for (int h : h1)
                if (!in_arc(h, a, b, n2)) { ok = false; break; }
            if (ok)
                for (int h : h2)
                    if (!in_arc(h, b, a, n2)) { ok = false; break; }
            if (ok) return true;
        }
    return false;
}

} // namespace detail

// Bookkeeping for one stabilization'/birth, consumed by the chain-map module.
// The distinguished point c lies on the two freshly inserted circles and has
// state coordinates (rc, cc): a state contains c iff perm[rc] == cc.
struct StabRecord {
    int rc = 0, cc = 0;        // c-point: new horizontal/vertical circle indices in g'
    int o1_row = 0;            // row of the new O (== rc)
    int o2_row = 0;            // row of the O just below, in g' indexing
    bool is_birth = false;
    std::vector<int> row_map;  // g' row -> g row (-1 for the new row)
    std::vector<int> col_map;  // g' col -> g col (-1 for the new column)
};

inline GridDiagram stabilize_prime(const GridDiagram& g, int r, int c, StabRecord* rec = nullptr) {
    if (r < 0 || r >= g.n || c < 0 || c >= g.n || !g.has_x(r, c))
        throw invalid_input_error("stabilization requires an X-marking at the given cell");
    GridDiagram h;
    h.n = g.n + 1;
    h.cells.assign(static_cast<size_t>(h.n) * h.n, 0);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            uint8_t b = g.cell(i, j);
            if (i == r && j == c) b &= static_cast<uint8_t>(~CELL_X); // this X moves
            h.cell(i < r + 1 ? i : i + 1, j < c + 1 ? j : j + 1) |= b;
        }
    h.cell(r, c + 1) |= CELL_X;     // moved X (X2)
    h.cell(r + 1, c) |= CELL_X;     // new X (X1)
    h.cell(r + 1, c + 1) |= CELL_O; // new O (O1)
    h.mode = derive_mode(h);
    if (rec) {
        rec->rc = r + 1;
        rec->cc = c + 1;
        rec->o1_row = r + 1;
        rec->o2_row = r;
        rec->is_birth = false;
        rec->row_map.assign(h.n, -1);
        rec->col_map.assign(h.n, -1);
        for (int i = 0; i < h.n; ++i) {
            if (i != r + 1) rec->row_map[i] = i < r + 1 ? i : i - 1;
            if (i != c + 1) rec->col_map[i] = i < c + 1 ? i : i - 1;
        }
    }
    return h;
}

inline GridDiagram birth_move(const GridDiagram& g, int r, int c, StabRecord* rec = nullptr) {
    if (r < 0 || r >= g.n || c < 0 || c >= g.n || !g.has_o(r, c))
        throw invalid_input_error("birth requires an O-marking at the given cell");
    GridDiagram h;
    h.n = g.n + 1;
    h.cells.assign(static_cast<size_t>(h.n) * h.n, 0);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            h.cell(i < r + 1 ? i : i + 1, j < c + 1 ? j : j + 1) = g.cell(i, j);
    h.cell(r + 1, c + 1) = CELL_X | CELL_OSTAR;
    h.mode = Mode::extended;
    if (rec) {
        rec->rc = r + 1;
        rec->cc = c + 1;
        rec->o1_row = r + 1;
        rec->o2_row = r;
        rec->is_birth = true;
        rec->row_map.assign(h.n, -1);
        rec->col_map.assign(h.n, -1);
        for (int i = 0; i < h.n; ++i) {
            if (i != r + 1) rec->row_map[i] = i < r + 1 ? i : i - 1;
            if (i != c + 1) rec->col_map[i] = i < c + 1 ? i : i - 1;
        }
    }
    return h;
}

// Attaches an unknotted loop at the vertex whose O* sits at (r,c): the new
// row/column form the stabilization' block with the vertex as its fourth,
// extra marking. Nothing moves, so the vertex gains one incoming and one
// outgoing edge and balancedness survives.
inline GridDiagram wedge_move(const GridDiagram& g, int r, int c, StabRecord* rec = nullptr) {
    if (r < 0 || r >= g.n || c < 0 || c >= g.n || !g.has_ostar(r, c))
        throw invalid_input_error("wedge requires an O*-marking at the given cell");
    GridDiagram h;
    h.n = g.n + 1;
    h.cells.assign(static_cast<size_t>(h.n) * h.n, 0);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            h.cell(i < r + 1 ? i : i + 1, j < c + 1 ? j : j + 1) = g.cell(i, j);
    h.cell(r, c + 1) |= CELL_X;
    h.cell(r + 1, c) |= CELL_X;
    h.cell(r + 1, c + 1) |= CELL_O;
    h.mode = derive_mode(h);
    if (rec) {
        rec->rc = r + 1;
        rec->cc = c + 1;
        rec->o1_row = r + 1;
        rec->o2_row = r;
        rec->is_birth = false;
        rec->row_map.assign(h.n, -1);
        rec->col_map.assign(h.n, -1);
        for (int i = 0; i < h.n; ++i) {
            if (i != r + 1) rec->row_map[i] = i < r + 1 ? i : i - 1;
            if (i != c + 1) rec->col_map[i] = i < c + 1 ? i : i - 1;
        }
    }
    return h;
}

inline GridDiagram apply_move(const GridDiagram& g, const MoveDescriptor& mv) {
    using K = MoveDescriptor::Kind;
    const int n = g.n;
    GridDiagram h;

    auto in_range = [&](int v) { return v >= 0 && v < n; };

    switch (mv.kind) {
        case K::cyclic: {
            h = g;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    h.cell(detail::wrap(r + mv.a, n), detail::wrap(c + mv.b, n)) = g.cell(r, c);
            break;
        }
        case K::commute_cols:
        case K::commute_rows: {
            bool cols = mv.kind == K::commute_cols;
            if (!in_range(mv.a)) throw invalid_input_error("commutation index outside grid");
            if (!detail::commute_legal(g, cols, mv.a))
                throw invalid_input_error("commutation illegal: LS condition violated at " +
                                          std::string(cols ? "columns " : "rows ") + std::to_string(mv.a) +
                                          "," + std::to_string(detail::wrap(mv.a + 1, n)));
            h = g;
            int o = detail::wrap(mv.a + 1, n);
            for (int k = 0; k < n; ++k) {
                if (cols) {
                    h.cell(k, mv.a) = g.cell(k, o);
                    h.cell(k, o) = g.cell(k, mv.a);
                } else {
                    h.cell(mv.a, k) = g.cell(o, k);
                    h.cell(o, k) = g.cell(mv.a, k);
                }
            }
            break;
        }
        case K::stabilize:
            h = stabilize_prime(g, mv.a, mv.b);
            break;
        case K::destabilize: {
            // (a,b) names the O of the stabilization pattern: its row holds
            // only {X at b-1, O at b}, its column only {O at a, X at a-1}.
            int r1 = mv.a, c1 = mv.b;
            if (!in_range(r1) || !in_range(c1) || !g.has_o(r1, c1) || g.has_ostar(r1, c1))
                throw invalid_input_error("destabilization requires a plain O at the given cell");
            int xr = detail::wrap(r1 - 1, n), xc = detail::wrap(c1 - 1, n);
            bool pattern = g.cell(r1, c1) == CELL_O && g.cell(r1, xc) == CELL_X &&
                           g.cell(xr, c1) == CELL_X && x_count_row(g, r1) == 1 &&
                           x_count_col(g, c1) == 1;
            if (!pattern || n < 2)
                throw invalid_input_error("destabilization pattern not found at the given cell");
            h.n = n - 1;
            h.cells.assign(static_cast<size_t>(h.n) * h.n, 0);
            for (int i = 0; i < n; ++i) {
                if (i == r1) continue;
                for (int j = 0; j < n; ++j) {
                    if (j == c1) continue;
                    h.cell(i < r1 ? i : i - 1, j < c1 ? j : j - 1) = g.cell(i, j);
                }
            }
            // The X just below the deleted O moves back across the deleted column.
            h.cell(xr < r1 ? xr : xr - 1, detail::wrap(xc < c1 ? xc : xc - 1, h.n)) |= CELL_X;
            h.mode = derive_mode(h);
            break;
        }
        case K::birth:
            h = birth_move(g, mv.a, mv.b);
            break;
        case K::death: {
            int r = mv.a, c = mv.b;
            if (!in_range(r) || !in_range(c) || !g.has_x(r, c) || !g.has_o(r, c))
                throw invalid_input_error("death requires a cell holding both X and O");
            if (x_count_row(g, r) != 1 || x_count_col(g, c) != 1)
                throw invalid_input_error("death requires the X+O cell to be alone in its row and column");
            if (n < 2) throw invalid_input_error("cannot delete the only row");
            h.n = n - 1;
            h.cells.assign(static_cast<size_t>(h.n) * h.n, 0);
            for (int i = 0; i < n; ++i) {
                if (i == r) continue;
                for (int j = 0; j < n; ++j) {
                    if (j == c) continue;
                    h.cell(i < r ? i : i - 1, j < c ? j : j - 1) = g.cell(i, j);
                }
            }
            h.mode = derive_mode(h);
            break;
        }
        case K::xsaddle: {
            int r = mv.a, c = mv.b;
            if (!in_range(r) || !in_range(c)) throw invalid_input_error("saddle block outside grid");
            int r2 = detail::wrap(r + 1, n), c2 = detail::wrap(c + 1, n);
            if (r2 == r || c2 == c) throw invalid_input_error("saddle needs a 2x2 block");
            if (!g.has_x(r2, c) || !g.has_x(r, c2))
                throw invalid_input_error("x-saddle requires X at top-left and bottom-right of the block");
            if (g.has_x(r, c) || g.has_x(r2, c2))
                throw invalid_input_error("x-saddle target cells already hold X-markings");
            h = g;
            h.cell(r2, c) &= static_cast<uint8_t>(~CELL_X);
            h.cell(r, c2) &= static_cast<uint8_t>(~CELL_X);
            h.cell(r, c) |= CELL_X;
            h.cell(r2, c2) |= CELL_X;
            h.mode = derive_mode(h);
            break;
        }
        case K::osaddle: {
            int r = mv.a, c = mv.b;
            if (!in_range(r) || !in_range(c)) throw invalid_input_error("saddle block outside grid");
            int r2 = detail::wrap(r + 1, n), c2 = detail::wrap(c + 1, n);
            if (r2 == r || c2 == c) throw invalid_input_error("saddle needs a 2x2 block");
            if (!g.has_ostar(r2, c) || !g.has_o(r, c2) || g.has_ostar(r, c2))
                throw invalid_input_error("o-saddle requires O* at top-left and plain O at bottom-right");
            if (g.has_o(r, c) || g.has_o(r2, c2))
                throw invalid_input_error("o-saddle target cells already hold O-markings");
            h = g;
            h.cell(r2, c) &= static_cast<uint8_t>(~CELL_OSTAR);
            h.cell(r, c2) &= static_cast<uint8_t>(~CELL_O);
            h.cell(r, c) |= CELL_OSTAR;
            h.cell(r2, c2) |= CELL_OSTAR;
            h.mode = derive_mode(h);
            break;
        }
    }
    validate(h);
    return h;
}

inline GridDiagram apply_moves(GridDiagram g, const std::vector<MoveDescriptor>& moves) {
    for (const auto& m : moves) g = apply_move(g, m);
    return g;
}

} // namespace gridups
