#include <benchmark/benchmark.h>

#include "gang/analysis.hpp"

using namespace gang;

// Profile sweeps are embarrassingly parallel; this compares the OpenMP
// driver against the serial reference on the same instance.

namespace {

	struct Instance {
		std::vector<Job> jobs;
		std::vector<dtime_t> e_min;
		int m = 4;
	};

	Instance sweep_instance()
	{
		// 7 jobs with [1, wcet] ranges: 3*2*3*2*3*2*3 = 648 profiles,
		// each needing up to 7 prefix simulations
		Instance inst;
		const int widths[] = {1, 2, 1, 3, 2, 1, 4};
		const dtime_t wcets[] = {3, 2, 3, 2, 3, 2, 3};
		for (int i = 0; i < 7; i++) {
			Job j;
			j.task_index = i;
			j.release = i % 3;
			j.width = widths[i];
			j.wcet = wcets[i];
			j.deadline = 64;
			j.label = "J" + std::to_string(i + 1);
			inst.jobs.push_back(std::move(j));
			inst.e_min.push_back(1);
		}
		return inst;
	}

	void BM_probe_serial(benchmark::State& state)
	{
		Instance inst = sweep_instance();
		ProbeOptions opts;
		for (auto _ : state) {
			auto report = predictability_probe_serial(
				inst.jobs, inst.e_min, inst.m, Policy::SlackReclaiming, opts);
			benchmark::DoNotOptimize(report);
		}
	}

	void BM_probe_parallel(benchmark::State& state)
	{
		Instance inst = sweep_instance();
		ProbeOptions opts;
		for (auto _ : state) {
			auto report = predictability_probe(
				inst.jobs, inst.e_min, inst.m, Policy::SlackReclaiming, opts);
			benchmark::DoNotOptimize(report);
		}
	}

}

BENCHMARK(BM_probe_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_probe_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
