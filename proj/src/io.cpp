#include "eqwreath/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace eqw {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

bool blank_or_comment(const std::string& line) {
  std::size_t first = line.find_first_not_of(" \t");
  return first == std::string::npos || line[first] == '#';
}

std::vector<long long> parse_integers(const std::string& line, int line_no) {
  std::vector<long long> out;
  std::istringstream in(line);
  long long v;
  while (in >> v) out.push_back(v);
  std::string rest;
  in.clear();
  if (in >> rest)
    throw ParseError("line " + std::to_string(line_no) + ": unexpected token '" +
                     rest + "'");
  return out;
}

}  // namespace

FiniteGroup parse_group_text(const std::string& text, const std::string& name) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && blank_or_comment(lines[i])) ++i;
  if (i >= lines.size()) throw ParseError("group file is empty");

  std::istringstream header(lines[i]);
  std::string kind;
  long long size = 0;
  header >> kind >> size;
  std::string rest;
  if (header >> rest)
    throw ParseError("line " + std::to_string(i + 1) + ": unexpected token '" +
                     rest + "'");
  ++i;

  if (kind == "cayley") {
    if (size < 1 || size > kDefaultOrderCap)
      throw ParseError("cayley order must be between 1 and " +
                       std::to_string(kDefaultOrderCap));
    std::vector<std::vector<int>> table;
    for (; i < lines.size() && static_cast<long long>(table.size()) < size; ++i) {
      if (blank_or_comment(lines[i])) continue;
      std::vector<long long> row = parse_integers(lines[i], static_cast<int>(i + 1));
      table.emplace_back(row.begin(), row.end());
    }
    if (static_cast<long long>(table.size()) < size)
      throw ParseError("cayley table has too few rows");
    for (; i < lines.size(); ++i)
      if (!blank_or_comment(lines[i]))
        throw ParseError("line " + std::to_string(i + 1) +
                         ": trailing garbage after the table");
    return from_cayley_table(static_cast<int>(size), table, name);
  }
  if (kind == "perm") {
    if (size < 1 || size > kDefaultOrderCap)
      throw ParseError("perm degree must be between 1 and " +
                       std::to_string(kDefaultOrderCap));
    std::vector<std::string> generators;
    for (; i < lines.size(); ++i) {
      if (blank_or_comment(lines[i])) continue;
      generators.push_back(lines[i]);
    }
    return from_permutations(static_cast<int>(size), generators, name);
  }
  throw ParseError("group file must start with 'cayley <n>' or 'perm <degree>'");
}

FiniteGroup load_group(const std::string& path) {
  try {
    return parse_group_text(read_file(path), stem_of(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.position);
  }
}

EquationSystem load_system(const std::string& path) {
  try {
    return parse_system(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.position);
  }
}

std::pair<QuotientTower, SectionFamily> parse_tower_text(const std::string& text,
                                                         const std::string& base_dir) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && blank_or_comment(lines[i])) ++i;
  if (i >= lines.size()) throw ParseError("tower file is empty");

  std::istringstream header(lines[i]);
  std::string kind;
  header >> kind;

  std::vector<SectionOverride> overrides;
  auto parse_section_line = [&](const std::string& line, int line_no) {
    std::istringstream in(line);
    std::string tag;
    in >> tag;
    SectionOverride o;
    if (!(in >> o.level))
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 'section <level> <points...>'");
    long long p;
    while (in >> p) o.points.push_back(p);
    overrides.push_back(std::move(o));
  };

  if (kind == "ztower") {
    std::vector<long long> moduli;
    long long m;
    while (header >> m) moduli.push_back(m);
    ++i;
    for (; i < lines.size(); ++i) {
      if (blank_or_comment(lines[i])) continue;
      std::istringstream in(lines[i]);
      std::string tag;
      in >> tag;
      if (tag != "section")
        throw ParseError("line " + std::to_string(i + 1) + ": unexpected line '" +
                         lines[i] + "'");
      parse_section_line(lines[i], static_cast<int>(i + 1));
    }
    QuotientTower tower = QuotientTower::integers(std::move(moduli));
    SectionFamily sections = make_sections(tower, overrides);
    return {std::move(tower), std::move(sections)};
  }

  if (kind == "explicit") {
    std::string rest;
    if (header >> rest)
      throw ParseError("line " + std::to_string(i + 1) + ": unexpected token '" +
                       rest + "'");
    ++i;
    std::vector<FiniteGroup> levels;
    struct PendingHom {
      int fine, coarse;
      std::vector<long long> map;
    };
    std::vector<PendingHom> homs;
    for (; i < lines.size(); ++i) {
      if (blank_or_comment(lines[i])) continue;
      std::istringstream in(lines[i]);
      std::string tag;
      in >> tag;
      if (tag == "group") {
        std::string path;
        in >> path;
        if (path.empty())
          throw ParseError("line " + std::to_string(i + 1) + ": expected a path");
        std::string full = base_dir.empty()
                               ? path
                               : (std::filesystem::path(base_dir) / path).string();
        levels.push_back(load_group(full));
      } else if (tag == "hom") {
        PendingHom h;
        if (!(in >> h.fine >> h.coarse))
          throw ParseError("line " + std::to_string(i + 1) +
                           ": expected 'hom <fine> <coarse>'");
        ++i;
        while (i < lines.size() && blank_or_comment(lines[i])) ++i;
        if (i >= lines.size())
          throw ParseError("hom is missing its image row");
        h.map = parse_integers(lines[i], static_cast<int>(i + 1));
        homs.push_back(std::move(h));
      } else if (tag == "section") {
        parse_section_line(lines[i], static_cast<int>(i + 1));
      } else {
        throw ParseError("line " + std::to_string(i + 1) + ": unexpected line '" +
                         lines[i] + "'");
      }
    }
    if (levels.empty()) throw ParseError("explicit tower needs group lines");
    std::vector<GroupHom> steps(levels.size() - 1);
    std::vector<char> seen(levels.size(), 0);
    for (const PendingHom& h : homs) {
      if (h.fine != h.coarse + 1 || h.coarse < 1 ||
          h.fine > static_cast<int>(levels.size()))
        throw ParseError("hom " + std::to_string(h.fine) + " " +
                         std::to_string(h.coarse) +
                         ": only adjacent maps (j+1 -> j) are accepted");
      if (seen[h.coarse])
        throw ParseError("duplicate hom for levels " + std::to_string(h.fine) +
                         " -> " + std::to_string(h.coarse));
      seen[h.coarse] = 1;
      std::vector<int> map(h.map.begin(), h.map.end());
      steps[h.coarse - 1] =
          make_hom(levels[h.fine - 1], levels[h.coarse - 1], std::move(map));
    }
    for (std::size_t j = 1; j < levels.size(); ++j)
      if (!seen[j])
        throw ParseError("missing hom " + std::to_string(j + 1) + " -> " +
                         std::to_string(j));
    QuotientTower tower =
        QuotientTower::explicit_chain(std::move(levels), std::move(steps));
    SectionFamily sections = make_sections(tower, overrides);
    return {std::move(tower), std::move(sections)};
  }

  throw ParseError("tower file must start with 'ztower' or 'explicit'");
}

std::pair<QuotientTower, SectionFamily> load_tower(const std::string& path) {
  try {
    return parse_tower_text(read_file(path),
                            std::filesystem::path(path).parent_path().string());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.position);
  }
}

std::vector<long long> parse_assignments(const std::string& text, int count) {
  std::vector<long long> out(count, 0);
  std::vector<char> seen(count, 0);
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || item.size() < 4 || item[0] != 'a')
      throw ParseError("expected 'a<i>=<value>', got '" + item + "'");
    int index;
    long long value;
    try {
      index = std::stoi(item.substr(1, eq - 1));
      value = std::stoll(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("expected 'a<i>=<value>', got '" + item + "'");
    }
    if (index < 1 || index > count)
      throw ParseError("assignment index a" + std::to_string(index) +
                       " is out of range (expected 1.." + std::to_string(count) + ")");
    if (seen[index - 1])
      throw ParseError("duplicate assignment for a" + std::to_string(index));
    seen[index - 1] = 1;
    out[index - 1] = value;
  }
  for (int i = 0; i < count; ++i)
    if (!seen[i])
      throw ParseError("missing assignment for a" + std::to_string(i + 1));
  return out;
}

std::vector<SupportPoint> parse_support(const std::string& text) {
  std::vector<SupportPoint> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    std::size_t at = item.find('@');
    std::size_t eq = item.find('=', at == std::string::npos ? 0 : at);
    if (item.empty() || item[0] != 'f' || at == std::string::npos ||
        eq == std::string::npos)
      throw ParseError("expected 'f<i>@<point>=<value>', got '" + item + "'");
    SupportPoint s;
    try {
      s.coordinate = std::stoi(item.substr(1, at - 1));
      s.point = std::stoll(item.substr(at + 1, eq - at - 1));
      s.value = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("expected 'f<i>@<point>=<value>', got '" + item + "'");
    }
    out.push_back(s);
  }
  // duplicate (coordinate, point) pairs are rejected downstream with the
  // system in hand; catch the plain duplicates here for a better message
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = a + 1; b < out.size(); ++b)
      if (out[a].coordinate == out[b].coordinate && out[a].point == out[b].point)
        throw ParseError("duplicate support point f" +
                         std::to_string(out[a].coordinate) + "@" +
                         std::to_string(out[a].point));
  return out;
}

}  // namespace eqw
