#include "gang/io.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace gang {

	using json = nlohmann::ordered_json;

	namespace {

		[[noreturn]] void syntax_error(const std::string& text,
		                               const nlohmann::json::parse_error& e)
		{
			// e.byte is 1-based; count lines up to the failure point
			std::size_t pos = std::min(text.size(),
			                           static_cast<std::size_t>(e.byte));
			std::size_t line = 1 + static_cast<std::size_t>(
				std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
			throw ParseError("SyntaxError at line " + std::to_string(line)
			                 + ": " + e.what());
		}

		void reject_unknown_fields(const json& obj,
		                           std::initializer_list<const char*> allowed,
		                           const std::string& where)
		{
			for (const auto& [key, value] : obj.items()) {
				bool known = false;
				for (const char* a : allowed)
					if (key == a)
						known = true;
				if (!known)
					throw ParseError("UnknownField '" + key + "' in " + where);
			}
		}

		dtime_t integer_field(const json& obj, const char* key,
		                      const std::string& where)
		{
			if (!obj.contains(key))
				throw ParseError("missing field '" + std::string(key)
				                 + "' in " + where);
			const auto& v = obj.at(key);
			if (!v.is_number_integer())
				throw ParseError("field '" + std::string(key) + "' in " + where
				                 + " must be an integer");
			return v.get<dtime_t>();
		}

	}

	TaskSetDocument parse_task_set(const std::string& text)
	{
		json root;
		try {
			root = json::parse(text);
		} catch (const nlohmann::json::parse_error& e) {
			syntax_error(text, e);
		}
		if (!root.is_object())
			throw ParseError("task-set document must be a JSON object");
		reject_unknown_fields(root, {"version", "platform", "priority", "tasks"},
		                      "task-set document");

		TaskSetDocument doc;
		doc.version = static_cast<int>(integer_field(root, "version",
		                                             "task-set document"));
		if (doc.version != 1)
			throw ParseError("unsupported task-set version "
			                 + std::to_string(doc.version));

		if (!root.contains("platform") || !root["platform"].is_object())
			throw ParseError("missing 'platform' object");
		reject_unknown_fields(root["platform"], {"m"}, "platform");
		doc.m = static_cast<int>(integer_field(root["platform"], "m", "platform"));

		if (root.contains("priority")) {
			const auto& pr = root["priority"];
			if (pr.is_string()) {
				doc.priority = pr.get<std::string>();
				if (doc.priority != "declared" && doc.priority != "rm"
				    && doc.priority != "dm" && doc.priority != "pm-sort")
					throw ParseError("unknown priority directive '"
					                 + doc.priority + "'");
			} else if (pr.is_array()) {
				doc.priority = "explicit";
				for (const auto& id : pr) {
					if (!id.is_string())
						throw ParseError("explicit priority order must list task ids");
					doc.priority_order.push_back(id.get<std::string>());
				}
			} else {
				throw ParseError("'priority' must be a directive string or an id list");
			}
		}

		if (!root.contains("tasks") || !root["tasks"].is_array())
			throw ParseError("missing 'tasks' array");
		for (const auto& jt : root["tasks"]) {
			if (!jt.is_object())
				throw ParseError("each task must be an object");
			std::string where = "task";
			if (jt.contains("id") && jt["id"].is_string())
				where += " '" + jt["id"].get<std::string>() + "'";
			reject_unknown_fields(jt, {"id", "O", "v", "C", "D", "T", "e_min"},
			                      where);
			TaskEntry t;
			if (!jt.contains("id") || !jt["id"].is_string())
				throw ParseError("task is missing a string 'id'");
			t.id = jt["id"].get<std::string>();
			t.offset = integer_field(jt, "O", where);
			t.width = static_cast<int>(integer_field(jt, "v", where));
			t.wcet = integer_field(jt, "C", where);
			t.deadline = integer_field(jt, "D", where);
			t.period = integer_field(jt, "T", where);
			if (jt.contains("e_min")) {
				t.e_min = integer_field(jt, "e_min", where);
				if (t.e_min < 1)
					throw ParseError("e_min of " + where + " must be >= 1");
			}
			doc.tasks.push_back(std::move(t));
		}
		return doc;
	}

	std::string serialize_task_set(const TaskSetDocument& doc)
	{
		json root;
		root["version"] = doc.version;
		root["platform"] = {{"m", doc.m}};
		if (doc.priority == "explicit")
			root["priority"] = doc.priority_order;
		else if (doc.priority != "declared")
			root["priority"] = doc.priority;
		root["tasks"] = json::array();
		for (const auto& t : doc.tasks) {
			json jt;
			jt["id"] = t.id;
			jt["O"] = t.offset;
			jt["v"] = t.width;
			jt["C"] = t.wcet;
			jt["D"] = t.deadline;
			jt["T"] = t.period;
			if (t.e_min > 0)
				jt["e_min"] = t.e_min;
			root["tasks"].push_back(std::move(jt));
		}
		return root.dump(2) + "\n";
	}

	ResolvedTaskSet resolve_task_set(const TaskSetDocument& doc)
	{
		std::vector<std::size_t> order(doc.tasks.size());
		for (std::size_t i = 0; i < order.size(); i++)
			order[i] = i;

		if (doc.priority == "rm") {
			std::stable_sort(order.begin(), order.end(),
			                 [&](std::size_t a, std::size_t b) {
				                 return doc.tasks[a].period < doc.tasks[b].period;
			                 });
		} else if (doc.priority == "dm") {
			std::stable_sort(order.begin(), order.end(),
			                 [&](std::size_t a, std::size_t b) {
				                 return doc.tasks[a].deadline < doc.tasks[b].deadline;
			                 });
		} else if (doc.priority == "pm-sort") {
			std::stable_sort(order.begin(), order.end(),
			                 [&](std::size_t a, std::size_t b) {
				                 return doc.tasks[a].width < doc.tasks[b].width;
			                 });
		} else if (doc.priority == "explicit") {
			if (doc.priority_order.size() != doc.tasks.size())
				throw ParseError("explicit priority order must name every task "
				                 "exactly once");
			order.clear();
			for (const auto& id : doc.priority_order) {
				auto it = std::find_if(doc.tasks.begin(), doc.tasks.end(),
				                       [&](const TaskEntry& t) {
					                       return t.id == id;
				                       });
				if (it == doc.tasks.end())
					throw ParseError("priority order names unknown task '"
					                 + id + "'");
				order.push_back(static_cast<std::size_t>(
					it - doc.tasks.begin()));
			}
			auto sorted = order;
			std::sort(sorted.begin(), sorted.end());
			if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
				throw ParseError("priority order repeats a task id");
		}

		ResolvedTaskSet out;
		out.ts.platform.proc_count = doc.m;
		for (std::size_t i : order) {
			const TaskEntry& e = doc.tasks[i];
			out.ts.tasks.push_back(
				{e.id, e.offset, e.width, e.wcet, e.deadline, e.period});
			out.e_min.push_back(e.e_min > 0 ? e.e_min : 1);
		}
		validate_or_throw(out.ts);
		return out;
	}

	ExecutionProfile parse_profile(const std::string& text,
	                               const std::vector<Job>& jobs)
	{
		json root;
		try {
			root = json::parse(text);
		} catch (const nlohmann::json::parse_error& e) {
			syntax_error(text, e);
		}
		if (!root.is_object())
			throw ParseError("profile document must be a JSON object");
		reject_unknown_fields(root, {"version", "actual"}, "profile document");
		if (integer_field(root, "version", "profile document") != 1)
			throw ParseError("unsupported profile version");
		if (!root.contains("actual") || !root["actual"].is_object())
			throw ParseError("missing 'actual' object");

		std::map<std::string, std::size_t> by_ref;
		for (std::size_t j = 0; j < jobs.size(); j++)
			by_ref[jobs[j].ref()] = j;

		ExecutionProfile profile = ExecutionProfile::worst_case(jobs);
		for (const auto& [ref, value] : root["actual"].items()) {
			auto it = by_ref.find(ref);
			if (it == by_ref.end())
				throw ParseError("profile names unknown job '" + ref + "'");
			if (!value.is_number_integer())
				throw ParseError("actual execution of '" + ref
				                 + "' must be an integer");
			profile.actual[it->second] = value.get<dtime_t>();
		}
		validate_profile(profile, jobs);
		return profile;
	}

	TraceDoc make_trace_doc(const SimResult& result)
	{
		TraceDoc doc;
		doc.m = result.m;
		doc.policy = policy_name(result.policy);
		for (std::size_t j = 0; j < result.jobs.size(); j++) {
			const Job& job = result.jobs[j];
			doc.jobs.push_back({job.ref(), job.label, job.release, job.width,
			                    job.wcet, result.actual[j], job.deadline});
		}

		const Trace& tr = result.trace;
		doc.slots.resize(static_cast<std::size_t>(tr.horizon()));
		for (dtime_t t = 0; t < tr.horizon(); t++) {
			auto& row = doc.slots[static_cast<std::size_t>(t)];
			row.reserve(static_cast<std::size_t>(tr.m));
			for (int p = 0; p < tr.m; p++)
				row.push_back(tr.exec[tr.at(t, p)]);
		}

		// merge per-quantum covers into maximal spans with a fixed processor set
		struct Open { std::vector<int> procs; dtime_t from; };
		std::map<int, Open> open;
		auto flush = [&](int job, dtime_t until) {
			auto it = open.find(job);
			if (it == open.end())
				return;
			SpanKind k = SpanKind::None;
			for (int p : it->second.procs)
				k = tr.kind[tr.at(it->second.from, p - 1)];
			doc.spans.push_back({job,
			                     k == SpanKind::Server ? "server" : "reservation",
			                     it->second.procs, it->second.from, until});
			open.erase(it);
		};
		for (dtime_t t = 0; t < tr.horizon(); t++) {
			std::map<int, std::vector<int>> now;
			for (int p = 0; p < tr.m; p++)
				if (tr.cover[tr.at(t, p)] != kIdle)
					now[tr.cover[tr.at(t, p)]].push_back(p + 1);
			for (auto it = open.begin(); it != open.end();) {
				int job = it->first;
				++it;
				auto cur = now.find(job);
				if (cur == now.end() || cur->second != open[job].procs)
					flush(job, t);
			}
			for (auto& [job, procs] : now)
				if (!open.contains(job))
					open[job] = {procs, t};
		}
		for (auto it = open.begin(); it != open.end();)
			flush((it++)->first, tr.horizon());
		std::sort(doc.spans.begin(), doc.spans.end(),
		          [](const TraceDoc::Span& a, const TraceDoc::Span& b) {
			          return std::tie(a.from, a.job) < std::tie(b.from, b.job);
		          });

		for (const auto& e : result.events)
			if (e.kind == EventKind::DeadlineMiss)
				doc.misses.push_back({e.job, e.t});
		return doc;
	}

	std::string serialize_trace(const TraceDoc& doc)
	{
		json root;
		root["version"] = doc.version;
		root["m"] = doc.m;
		root["policy"] = doc.policy;
		root["jobs"] = json::array();
		for (const auto& j : doc.jobs)
			root["jobs"].push_back({{"ref", j.ref},
			                        {"label", j.label},
			                        {"r", j.release},
			                        {"v", j.width},
			                        {"e_wc", j.wcet},
			                        {"e", j.actual},
			                        {"d", j.deadline}});
		root["slots"] = doc.slots;
		root["spans"] = json::array();
		for (const auto& s : doc.spans)
			root["spans"].push_back({{"job", s.job},
			                         {"kind", s.kind},
			                         {"procs", s.procs},
			                         {"from", s.from},
			                         {"until", s.until}});
		root["misses"] = json::array();
		for (const auto& miss : doc.misses)
			root["misses"].push_back({{"job", miss.job}, {"t", miss.t}});
		return root.dump(2) + "\n";
	}

	TraceDoc parse_trace(const std::string& text)
	{
		json root;
		try {
			root = json::parse(text);
		} catch (const nlohmann::json::parse_error& e) {
			syntax_error(text, e);
		}
		if (!root.is_object())
			throw ParseError("trace document must be a JSON object");
		reject_unknown_fields(root, {"version", "m", "policy", "jobs", "slots",
		                             "spans", "misses"}, "trace document");
		TraceDoc doc;
		doc.version = static_cast<int>(integer_field(root, "version", "trace"));
		if (doc.version != 1)
			throw ParseError("unsupported trace version");
		doc.m = static_cast<int>(integer_field(root, "m", "trace"));
		if (doc.m < 1)
			throw ParseError("trace needs m >= 1");
		doc.policy = root.value("policy", std::string("gang-fjp"));
		if (!root.contains("jobs") || !root["jobs"].is_array()
		    || !root.contains("slots") || !root["slots"].is_array())
			throw ParseError("trace needs 'jobs' and 'slots' arrays");
		for (const auto& jj : root["jobs"]) {
			TraceDoc::JobMeta meta;
			meta.ref = jj.at("ref").get<std::string>();
			meta.label = jj.at("label").get<std::string>();
			meta.release = jj.at("r").get<dtime_t>();
			meta.width = jj.at("v").get<int>();
			meta.wcet = jj.at("e_wc").get<dtime_t>();
			meta.actual = jj.at("e").get<dtime_t>();
			meta.deadline = jj.at("d").get<dtime_t>();
			doc.jobs.push_back(std::move(meta));
		}
		for (const auto& row : root["slots"]) {
			std::vector<int> r;
			for (const auto& cell : row) {
				int v = cell.get<int>();
				if (v < -1 || v >= static_cast<int>(doc.jobs.size()))
					throw ParseError("slot references unknown job index "
					                 + std::to_string(v));
				r.push_back(v);
			}
			if (static_cast<int>(r.size()) != doc.m)
				throw ParseError("slot row length does not match m");
			doc.slots.push_back(std::move(r));
		}
		auto check_job = [&](int job) {
			if (job < 0 || job >= static_cast<int>(doc.jobs.size()))
				throw ParseError("trace references unknown job index "
				                 + std::to_string(job));
			return job;
		};
		if (root.contains("spans"))
			for (const auto& js : root["spans"]) {
				TraceDoc::Span s;
				s.job = check_job(js.at("job").get<int>());
				s.kind = js.at("kind").get<std::string>();
				s.procs = js.at("procs").get<std::vector<int>>();
				for (int p : s.procs)
					if (p < 1 || p > doc.m)
						throw ParseError("span processor out of range");
				s.from = js.at("from").get<dtime_t>();
				s.until = js.at("until").get<dtime_t>();
				doc.spans.push_back(std::move(s));
			}
		if (root.contains("misses"))
			for (const auto& jm : root["misses"])
				doc.misses.push_back({check_job(jm.at("job").get<int>()),
				                      jm.at("t").get<dtime_t>()});
		return doc;
	}

	std::string trace_to_csv(const TraceDoc& doc)
	{
		std::ostringstream out;
		out << "t";
		for (int p = 1; p <= doc.m; p++)
			out << ",p" << p;
		out << "\n";
		for (std::size_t t = 0; t < doc.slots.size(); t++) {
			out << t;
			for (int cell : doc.slots[t]) {
				out << ',';
				if (cell < 0)
					out << '0';
				else
					out << doc.jobs[static_cast<std::size_t>(cell)].label;
			}
			out << "\n";
		}
		return out.str();
	}

	LabelGrid csv_to_grid(const std::string& csv)
	{
		std::istringstream in(csv);
		std::string line;
		if (!std::getline(in, line))
			throw ParseError("empty CSV");
		LabelGrid grid;
		{
			std::istringstream hdr(line);
			std::string cell;
			if (!std::getline(hdr, cell, ',') || cell != "t")
				throw ParseError("CSV header must start with 't', got '"
				                 + cell + "'");
			int p = 0;
			while (std::getline(hdr, cell, ',')) {
				p++;
				if (cell != "p" + std::to_string(p))
					throw ParseError("CSV header column " + std::to_string(p)
					                 + " must be 'p" + std::to_string(p)
					                 + "', got '" + cell + "'");
			}
			grid.m = p;
		}
		std::size_t t = 0;
		while (std::getline(in, line)) {
			if (line.empty())
				continue;
			std::istringstream row(line);
			std::string cell;
			if (!std::getline(row, cell, ',') || cell != std::to_string(t))
				throw ParseError("CSV row " + std::to_string(t)
				                 + " has time column '" + cell + "'");
			std::vector<std::string> cells;
			while (std::getline(row, cell, ','))
				cells.push_back(cell);
			if (static_cast<int>(cells.size()) != grid.m)
				throw ParseError("CSV row " + std::to_string(t)
				                 + " has " + std::to_string(cells.size())
				                 + " cells, expected " + std::to_string(grid.m));
			grid.rows.push_back(std::move(cells));
			t++;
		}
		return grid;
	}

	std::string grid_to_csv(const LabelGrid& grid)
	{
		std::ostringstream out;
		out << "t";
		for (int p = 1; p <= grid.m; p++)
			out << ",p" << p;
		out << "\n";
		for (std::size_t t = 0; t < grid.rows.size(); t++) {
			out << t;
			for (const auto& cell : grid.rows[t])
				out << ',' << cell;
			out << "\n";
		}
		return out.str();
	}

	LabelGrid grid_of(const TraceDoc& doc)
	{
		LabelGrid grid;
		grid.m = doc.m;
		for (const auto& row : doc.slots) {
			std::vector<std::string> cells;
			for (int cell : row)
				cells.push_back(cell < 0 ? "0"
				                : doc.jobs[static_cast<std::size_t>(cell)].label);
			grid.rows.push_back(std::move(cells));
		}
		return grid;
	}

	namespace {

		constexpr int kCellW = 26;
		constexpr int kCellH = 24;
		constexpr int kLaneGap = 6;
		constexpr int kLeft = 64;
		constexpr int kTop = 30;

		const char* kPalette[] = {
			"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
			"#b07aa1", "#edc948", "#76b7b2", "#ff9da7",
		};

		std::string color_of(const std::string& label)
		{
			std::size_t h = std::hash<std::string>{}(label);
			return kPalette[h % (sizeof(kPalette) / sizeof(kPalette[0]))];
		}

		int lane_y(int proc /*1-based*/)
		{
			return kTop + (proc - 1) * (kCellH + kLaneGap);
		}

		void svg_header(std::ostringstream& out, int m, std::size_t horizon)
		{
			int w = kLeft + static_cast<int>(horizon) * kCellW + 20;
			int h = kTop + m * (kCellH + kLaneGap) + 34;
			out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
			    << "\" height=\"" << h << "\" font-family=\"monospace\" font-size=\"11\">\n";
			for (int p = 1; p <= m; p++) {
				out << "<text x=\"8\" y=\"" << lane_y(p) + kCellH / 2 + 4
				    << "\">p" << p << "</text>\n";
				out << "<rect x=\"" << kLeft << "\" y=\"" << lane_y(p)
				    << "\" width=\"" << static_cast<int>(horizon) * kCellW
				    << "\" height=\"" << kCellH
				    << "\" fill=\"#f4f4f4\" stroke=\"#ddd\"/>\n";
			}
			std::size_t step = horizon > 40 ? 5 : 1;
			for (std::size_t t = 0; t <= horizon; t += step)
				out << "<text x=\"" << kLeft + static_cast<int>(t) * kCellW - 3
				    << "\" y=\"" << kTop - 8 << "\" fill=\"#666\">" << t
				    << "</text>\n";
		}

		void svg_runs(std::ostringstream& out,
		              const std::vector<std::vector<int>>& slots, int m,
		              const std::function<std::string(int)>& label_of)
		{
			for (int p = 0; p < m; p++) {
				std::size_t t = 0;
				while (t < slots.size()) {
					int job = slots[t][static_cast<std::size_t>(p)];
					if (job < 0) {
						t++;
						continue;
					}
					std::size_t end = t;
					while (end < slots.size()
					       && slots[end][static_cast<std::size_t>(p)] == job)
						end++;
					std::string label = label_of(job);
					int x = kLeft + static_cast<int>(t) * kCellW;
					int wid = static_cast<int>(end - t) * kCellW;
					out << "<rect class=\"exec\" x=\"" << x << "\" y=\""
					    << lane_y(p + 1) + 3 << "\" width=\"" << wid
					    << "\" height=\"" << kCellH - 6 << "\" fill=\""
					    << color_of(label) << "\" stroke=\"#333\"/>\n";
					out << "<text x=\"" << x + 4 << "\" y=\""
					    << lane_y(p + 1) + kCellH / 2 + 4
					    << "\" fill=\"#fff\">" << label << "</text>\n";
					t = end;
				}
			}
		}

	}

	std::string trace_to_svg(const TraceDoc& doc)
	{
		std::ostringstream out;
		svg_header(out, doc.m, doc.slots.size());

		// spans first so service drawn inside a server stays visible on top
		for (const auto& s : doc.spans) {
			// contiguous lanes merge into one gray block
			std::size_t i = 0;
			while (i < s.procs.size()) {
				std::size_t k = i;
				while (k + 1 < s.procs.size()
				       && s.procs[k + 1] == s.procs[k] + 1)
					k++;
				int y = lane_y(s.procs[i]);
				int h = lane_y(s.procs[k]) + kCellH - y;
				out << "<rect class=\"" << s.kind << "\" x=\""
				    << kLeft + static_cast<int>(s.from) * kCellW << "\" y=\"" << y
				    << "\" width=\""
				    << static_cast<int>(s.until - s.from) * kCellW
				    << "\" height=\"" << h << "\" fill=\""
				    << (s.kind == "server" ? "#8a8a8a" : "#c0c0c0")
				    << "\" fill-opacity=\"0.55\" stroke=\"#555\" stroke-dasharray=\"3,2\"/>\n";
				i = k + 1;
			}
		}

		svg_runs(out, doc.slots, doc.m, [&](int job) {
			return doc.jobs[static_cast<std::size_t>(job)].ref;
		});

		int bottom = lane_y(doc.m) + kCellH;
		for (const auto& miss : doc.misses) {
			int x = kLeft + static_cast<int>(miss.t) * kCellW;
			out << "<line class=\"miss\" x1=\"" << x << "\" y1=\"" << kTop - 4
			    << "\" x2=\"" << x << "\" y2=\"" << bottom
			    << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
			out << "<text x=\"" << x + 3 << "\" y=\"" << bottom + 14
			    << "\" fill=\"#d62728\">miss "
			    << doc.jobs[static_cast<std::size_t>(miss.job)].ref
			    << "</text>\n";
		}
		out << "</svg>\n";
		return out.str();
	}

	std::string grid_to_svg(const LabelGrid& grid)
	{
		// rebuild a minimal doc: labels become both ref and label
		TraceDoc doc;
		doc.m = grid.m;
		std::map<std::string, int> index;
		for (const auto& row : grid.rows) {
			std::vector<int> cells;
			for (const auto& label : row) {
				if (label == "0") {
					cells.push_back(-1);
					continue;
				}
				auto [it, fresh] = index.try_emplace(
					label, static_cast<int>(doc.jobs.size()));
				if (fresh)
					doc.jobs.push_back({label, label, 0, 1, 1, 1, 0});
				cells.push_back(it->second);
			}
			doc.slots.push_back(std::move(cells));
		}
		return trace_to_svg(doc);
	}

}
